//! Generating functions for the partition families studied here, each in its
//! defining form and in the rewritten forms used to read off coefficient
//! signs.
//!
//! Every infinite sum is cut as soon as the leading exponent of its summand
//! passes the truncation order. All remaining factors in a summand have
//! constant term 1, so the cut is exact.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::identities::{compare_series, CheckResult};
use crate::series::{FormalSeries, Monomial};

macro_rules! families {
    ($($variant:ident => $name:literal),* $(,)?) => {
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum FamilyId {
            $($variant),*
        }

        impl FamilyId {
            pub const ALL: &'static [FamilyId] = &[$(FamilyId::$variant),*];

            pub fn as_str(self) -> &'static str {
                match self {
                    $(FamilyId::$variant => $name),*
                }
            }
        }

        impl FromStr for FamilyId {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($name => Ok(FamilyId::$variant),)*
                    other => Err(Error::param(format!("unknown family `{other}`"))),
                }
            }
        }
    };
}

families! {
    Po => "po",
    Pe => "pe",
    P10m => "p10m",
    P01m => "p01m",
    P10mTransformed => "p10m_transformed",
    P01mTransformed => "p01m_transformed",
    PoTransformed => "po_transformed",
    PeTransformed => "pe_transformed",
    DiffPePo => "diff_pe_po",
    Diff2Pe3Po => "diff_2pe_3po",
    Eme => "eme",
    Ome => "ome",
    Emo => "emo",
    Omo => "omo",
    DiffOmeEme => "diff_ome_eme",
    DiffEmeOme => "diff_eme_ome",
    PeuOu => "peu_ou",
    PouEu => "pou_eu",
    QeuOu => "qeu_ou",
    QouEu => "qou_eu",
    QouEuSumform => "qou_eu_sumform",
    DiffQeuQou => "diff_qeu_qou",
    DiffPouPeu => "diff_pou_peu",
    ASeq => "a_seq",
    BSeq => "b_seq",
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// What kind of parameter a family takes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParamKind {
    None,
    /// residue modulus, `m >= 2`
    Modulus,
    /// minimum part, `m >= 1`
    MinPart,
    MinPartOdd,
    MinPartEven,
}

impl ParamKind {
    pub fn describe(self) -> &'static str {
        match self {
            ParamKind::None => "no params",
            ParamKind::Modulus => "m >= 2 (modulus)",
            ParamKind::MinPart => "m >= 1 (minimum part)",
            ParamKind::MinPartOdd => "odd m >= 1 (minimum part)",
            ParamKind::MinPartEven => "even m >= 2 (minimum part)",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct FamilyParams {
    pub m: Option<u32>,
}

impl FamilyParams {
    pub fn none() -> Self {
        FamilyParams { m: None }
    }

    pub fn with_m(m: u32) -> Self {
        FamilyParams { m: Some(m) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FamilyInfo {
    pub id: FamilyId,
    pub params: ParamKind,
    pub description: &'static str,
}

impl FamilyId {
    pub fn param_kind(self) -> ParamKind {
        use FamilyId::*;
        match self {
            P10m | P01m | P10mTransformed | P01mTransformed => ParamKind::Modulus,
            Eme | Ome | Emo | Omo => ParamKind::MinPart,
            DiffOmeEme => ParamKind::MinPartOdd,
            DiffEmeOme => ParamKind::MinPartEven,
            _ => ParamKind::None,
        }
    }

    pub fn description(self) -> &'static str {
        use FamilyId::*;
        match self {
            Po => "non-unitary partitions with more odd parts than even parts",
            Pe => "non-unitary partitions with more even parts than odd parts",
            P10m => "non-unitary partitions with more parts = 1 (mod m) than parts = 0 (mod m)",
            P01m => "non-unitary partitions with more parts = 0 (mod m) than parts = 1 (mod m)",
            P10mTransformed => "p10m rewritten as a single sum over Durfee-type terms",
            P01mTransformed => "p01m rewritten as a single sum over Durfee-type terms",
            PoTransformed => "po after the Euler transformation in base q^2",
            PeTransformed => "pe after the Euler transformation in base q^2",
            DiffPePo => "pe - po as a single sum",
            Diff2Pe3Po => "2pe - 3po as a single sum",
            Eme => "parts >= m, even count of each parity, more even parts",
            Ome => "parts >= m, even count of each parity, more odd parts",
            Emo => "parts >= m, odd count of each parity, more even parts",
            Omo => "parts >= m, odd count of each parity, more odd parts",
            DiffOmeEme => "ome - eme for odd m as a single double sum",
            DiffEmeOme => "eme - ome for even m as a single double sum",
            PeuOu => "every even part below every odd part",
            PouEu => "every odd part below every even part, all-even partitions excluded",
            QeuOu => "peu_ou restricted to non-unitary partitions",
            QouEu => "pou_eu restricted to non-unitary partitions",
            QouEuSumform => "qou_eu summed over the smallest odd part",
            DiffQeuQou => "qeu_ou - qou_eu via triangular numbers",
            DiffPouPeu => "pou_eu - peu_ou via triangular numbers",
            ASeq => "partial sums of partitions into even parts",
            BSeq => "partitions into even parts",
        }
    }

    pub fn info(self) -> FamilyInfo {
        FamilyInfo { id: self, params: self.param_kind(), description: self.description() }
    }
}

/// The complete family catalog in a fixed order.
pub fn list_families() -> Vec<FamilyInfo> {
    FamilyId::ALL.iter().map(|f| f.info()).collect()
}

fn validate(family: FamilyId, params: FamilyParams) -> Result<Option<usize>> {
    let kind = family.param_kind();
    let m = params.m;
    let bad = |why: &str| Err(Error::param(format!("family {family} requires {why}")));
    match (kind, m) {
        (ParamKind::None, None) => Ok(None),
        (ParamKind::None, Some(_)) => Err(Error::param(format!("family {family} takes no parameter"))),
        (_, None) => bad(kind.describe()),
        (ParamKind::Modulus, Some(m)) if m < 2 => bad(kind.describe()),
        (ParamKind::MinPart, Some(0)) => bad(kind.describe()),
        (ParamKind::MinPartOdd, Some(m)) if m % 2 == 0 => bad(kind.describe()),
        (ParamKind::MinPartEven, Some(m)) if m == 0 || m % 2 == 1 => bad(kind.describe()),
        (_, Some(m)) => Ok(Some(m as usize)),
    }
}

/// Builds `family` truncated at `order`.
pub fn build_series(family: FamilyId, params: FamilyParams, order: usize) -> Result<FormalSeries> {
    use FamilyId::*;
    let m = validate(family, params)?;
    let n = order;
    match family {
        Po => Ok(&durfee_pair_sum(n, 2, 3)? - &durfee_pair_sum(n, 2, 5)?),
        Pe => Ok(&inv_poch_inf(q(2), 1, n)? - &durfee_pair_sum(n, 2, 3)?),
        PoTransformed => {
            // Σ_{n≥1} q^{2n²+n}(1 - q^{2n}) / (q²;q²)_n²
            let sum = q_sum(n, 1, div_twice(2), |k| vec![(1, 2 * k * k + k), (-1, 2 * k * k + 3 * k)])?;
            sum.div_poch_infinite(q(3), 2)
        }
        PeTransformed => {
            let sum = q_sum(n, 1, div_twice(2), |k| vec![(1, 2 * k * k), (-1, 2 * k * k + 3 * k)])?;
            sum.div_poch_infinite(q(3), 2)
        }
        DiffPePo => {
            let sum = q_sum(n, 1, div_twice(2), |k| vec![(1, 2 * k * k), (-1, 2 * k * k + k)])?;
            sum.div_poch_infinite(q(3), 2)
        }
        Diff2Pe3Po => {
            // (1 - q^k)^2 (2 + q^k) = 2 - 3q^k + q^{3k}
            let sum = q_sum(n, 1, div_twice(2), |k| vec![(2, 2 * k * k), (-3, 2 * k * k + k), (1, 2 * k * k + 3 * k)])?;
            sum.div_poch_infinite(q(3), 2)
        }
        P10m => {
            let m = m.unwrap();
            let pref = residue_prefactor(m, n)?;
            let diff = &durfee_pair_sum(n, m, m + 1)? - &durfee_pair_sum(n, m, 2 * m + 1)?;
            Ok(&pref * &diff)
        }
        P01m => {
            let m = m.unwrap();
            let pref = residue_prefactor(m, n)?;
            Ok(&inv_poch_inf(q(2), 1, n)? - &(&pref * &durfee_pair_sum(n, m, m + 1)?))
        }
        P10mTransformed => {
            let m = m.unwrap();
            let sum = q_sum(n, 1, div_twice(m), |k| vec![(1, m * k * k + k), (-1, m * k * k + k + m * k)])?;
            sum.mul_poch_infinite(q(m), m)?.div_poch_infinite(q(2), 1)
        }
        P01mTransformed => {
            let m = m.unwrap();
            let sum = q_sum(n, 1, div_twice(m), |k| vec![(1, m * k * k), (-1, m * k * k + (m + 1) * k)])?;
            sum.mul_poch_infinite(q(m), m)?.div_poch_infinite(q(2), 1)
        }
        Eme | Ome | Emo | Omo | DiffOmeEme | DiffEmeOme => {
            let m = m.unwrap();
            let odd_min = if m % 2 == 1 { m } else { m + 1 };
            let even_min = if m % 2 == 0 { m } else { m + 1 };
            let (outer, inner, parity, with_gap) = match family {
                Eme => (even_min, odd_min, 0, false),
                Ome => (odd_min, even_min, 0, false),
                Emo => (even_min, odd_min, 1, false),
                Omo => (odd_min, even_min, 1, false),
                DiffOmeEme => (odd_min, even_min, 0, true),
                _ => (even_min, odd_min, 0, true),
            };
            parity_double_sum(n, outer, inner, parity, with_gap)
        }
        PeuOu | ASeq => inv_poch_inf(q(2), 2, n)?.div_poch(q(1), 1, 1),
        BSeq => inv_poch_inf(q(2), 2, n),
        PouEu => {
            let inner = &inv_poch_inf(q(1), 2, n)? - &inv_poch_inf(q(2), 2, n)?;
            inner.div_poch(q(1), 1, 1)
        }
        QeuOu => {
            let a = inv_poch_inf(q(2), 2, n)?.div_poch(q(1), 1, 1)?;
            Ok(&a - &inv_poch_inf(q(1), 2, n)?.shift(1))
        }
        QouEu => {
            let evens = inv_poch_inf(q(2), 2, n)?;
            Ok(&inv_poch_inf(q(1), 2, n)? - &evens.mul_sparse(&[(1, 0), (1, 1)]))
        }
        QouEuSumform => {
            // term_k = q^{2k+3} / ((q³;q²)_{k+1} (q^{2k+4};q²)_∞); the ratio between
            // consecutive denominators is (1 - q^{2k+3}) / (1 - q^{2k+2}).
            let start = inv_poch_inf(q(4), 2, n)?.div_poch(q(3), 2, 1)?;
            q_sum_from(
                start,
                0,
                |r, k| {
                    r.mul_binomial_in_place(-1, 2 * k + 2);
                    r.div_binomial_in_place(-1, 2 * k + 3)
                },
                |k| vec![(1, 2 * k + 3)],
            )
        }
        DiffQeuQou => {
            let mut inner = FormalSeries::one(n);
            for k in 1.. {
                let tri = (k + 1) * (k + 2) / 2;
                if tri + 2 > n {
                    break;
                }
                for j in 2..=k + 1 {
                    if let Some(c) = inner.coeff_mut(tri + j) {
                        *c += 1;
                    }
                }
            }
            inner.div_poch_infinite(q(2), 2)
        }
        DiffPouPeu => {
            let mut tri = triangular_series(n);
            *tri.coeff_mut(0).unwrap() -= 2;
            tri.div_poch_infinite(q(2), 2)?.div_poch(q(1), 1, 1)
        }
    }
}

fn q(e: usize) -> Monomial {
    Monomial::q_pow(e)
}

fn inv_poch_inf(a: Monomial, step: usize, order: usize) -> Result<FormalSeries> {
    FormalSeries::one(order).div_poch_infinite(a, step)
}

/// `Σ_{k ≥ 0} q^{e·k} / (q^s; q^s)_k²`
fn durfee_pair_sum(order: usize, s: usize, e: usize) -> Result<FormalSeries> {
    q_sum(order, 0, div_twice(s), |k| vec![(1, e * k)])
}

/// Advance step dividing by `(1 - q^{s·k})²`.
fn div_twice(s: usize) -> impl FnMut(&mut FormalSeries, usize) -> Result<()> {
    move |r, k| {
        r.div_binomial_in_place(-1, s * k)?;
        r.div_binomial_in_place(-1, s * k)
    }
}

/// `(q^{m+1}, q^m; q^m)_∞ / (q²; q)_∞`
fn residue_prefactor(m: usize, order: usize) -> Result<FormalSeries> {
    FormalSeries::one(order).mul_poch_infinite(q(m + 1), m)?.mul_poch_infinite(q(m), m)?.div_poch_infinite(q(2), 1)
}

fn triangular_series(order: usize) -> FormalSeries {
    let mut s = FormalSeries::zero(order);
    for k in 0.. {
        let t = k * (k + 1) / 2;
        match s.coeff_mut(t) {
            Some(c) => *c += 1,
            None => break,
        }
    }
    s
}

/// `Σ_{k ≥ start} R_k · P_k(q)` where `R_0 = 1`, `advance` turns `R_{k-1}`
/// into `R_k`, and `poly(k)` is a sparse polynomial `[(coef, exp)]` whose
/// lowest exponent grows with `k`.
pub(crate) fn q_sum<F, P>(order: usize, start: usize, advance: F, poly: P) -> Result<FormalSeries>
where
    F: FnMut(&mut FormalSeries, usize) -> Result<()>,
    P: Fn(usize) -> Vec<(i64, usize)>,
{
    q_sum_from(FormalSeries::one(order), start, advance, poly)
}

pub(crate) fn q_sum_from<F, P>(mut r: FormalSeries, start: usize, mut advance: F, poly: P) -> Result<FormalSeries>
where
    F: FnMut(&mut FormalSeries, usize) -> Result<()>,
    P: Fn(usize) -> Vec<(i64, usize)>,
{
    let order = r.order();
    let mut acc = FormalSeries::zero(order);
    // every summand used here has leading exponent >= k, so k never needs to
    // pass order + 1
    for k in 0..=order + 1 {
        if k > 0 {
            advance(&mut r, k)?;
        }
        let p = poly(k);
        let lead = p.iter().filter(|(c, _)| *c != 0).map(|&(_, e)| e).min();
        if k >= start {
            match lead {
                Some(l) if l > order => break,
                Some(_) => acc = &acc + &r.mul_sparse(&p),
                None => {}
            }
        }
    }
    Ok(acc)
}

/// `Σ_{n} q^{outer·n}/(q²;q²)_n · Σ_{k ≤ n-2} q^{inner·k}/(q²;q²)_k [· (1 - q^{n-k})]`
/// with `n`, `k` both of the given parity (`k ≥ 0` for even, `k ≥ 1` for odd).
fn parity_double_sum(order: usize, outer: usize, inner: usize, parity: usize, with_gap: bool) -> Result<FormalSeries> {
    let mut acc = FormalSeries::zero(order);
    // inverse products 1/(q²;q²)_n for n = 0, 1, 2, ...
    let mut inv = vec![FormalSeries::one(order)];
    // Σ q^{inner·k}/(q²;q²)_k and Σ q^{(inner-1)·k}/(q²;q²)_k over admitted k
    let mut plain = FormalSeries::zero(order);
    let mut gapped = FormalSeries::zero(order);
    for n in 1.. {
        if outer * n > order {
            break;
        }
        let mut next = inv[n - 1].clone();
        next.div_binomial_in_place(-1, 2 * n)?;
        inv.push(next);
        if n < 2 {
            continue;
        }
        let k = n - 2;
        if k % 2 == parity {
            plain = &plain + &inv[k].shift(inner * k);
            if with_gap {
                gapped = &gapped + &inv[k].shift((inner - 1) * k);
            }
        }
        if n % 2 != parity {
            continue;
        }
        let inner_sum = if with_gap { &plain - &gapped.shift(n) } else { plain.clone() };
        acc = &acc + &(&inv[n].shift(outer * n) * &inner_sum);
    }
    Ok(acc)
}

/// A labelled equality between two series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedCheck {
    pub id: String,
    pub result: CheckResult,
}

/// The equalities that tie defining forms to their rewritten forms, each
/// checked coefficient-wise at `order`.
pub fn transform_chain_checks(order: usize) -> Result<Vec<NamedCheck>> {
    use FamilyId::*;
    let b = |f: FamilyId, m: Option<u32>| build_series(f, FamilyParams { m }, order);
    let mut out = Vec::new();
    let mut push = |id: String, lhs: FormalSeries, rhs: FormalSeries| {
        out.push(NamedCheck { id, result: compare_series(&lhs, &rhs) });
    };
    let po = b(Po, None)?;
    let pe = b(Pe, None)?;
    push("po = po_transformed".into(), po.clone(), b(PoTransformed, None)?);
    push("pe = pe_transformed".into(), pe.clone(), b(PeTransformed, None)?);
    push("pe - po = diff_pe_po".into(), &pe - &po, b(DiffPePo, None)?);
    push("2pe - 3po = diff_2pe_3po".into(), &pe.scale(2) - &po.scale(3), b(Diff2Pe3Po, None)?);
    for m in 2..=6 {
        push(format!("p10m = p10m_transformed [m={m}]"), b(P10m, Some(m))?, b(P10mTransformed, Some(m))?);
        push(format!("p01m = p01m_transformed [m={m}]"), b(P01m, Some(m))?, b(P01mTransformed, Some(m))?);
    }
    for m in 1..=5 {
        let (eme, ome) = (b(Eme, Some(m))?, b(Ome, Some(m))?);
        if m % 2 == 1 {
            push(format!("ome - eme = diff_ome_eme [m={m}]"), &ome - &eme, b(DiffOmeEme, Some(m))?);
        } else {
            push(format!("eme - ome = diff_eme_ome [m={m}]"), &eme - &ome, b(DiffEmeOme, Some(m))?);
        }
    }
    let (qeu, qou) = (b(QeuOu, None)?, b(QouEu, None)?);
    let (peu, pou) = (b(PeuOu, None)?, b(PouEu, None)?);
    push("qou_eu = qou_eu_sumform".into(), qou.clone(), b(QouEuSumform, None)?);
    push("qeu_ou - qou_eu = diff_qeu_qou".into(), &qeu - &qou, b(DiffQeuQou, None)?);
    push("pou_eu - peu_ou = diff_pou_peu".into(), &pou - &peu, b(DiffPouPeu, None)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn coeffs(f: FamilyId, m: Option<u32>, order: usize) -> Vec<i64> {
        build_series(f, FamilyParams { m }, order).unwrap().to_i64_vec().unwrap()
    }

    #[test]
    fn po_pe_low_coefficients() {
        assert_eq!(coeffs(FamilyId::Po, None, 8), vec![0, 0, 0, 1, 0, 1, 1, 1, 2]);
        assert_eq!(coeffs(FamilyId::Pe, None, 8), vec![0, 0, 1, 0, 2, 0, 3, 1, 5]);
    }

    #[test]
    fn a_seq_start() {
        assert_eq!(coeffs(FamilyId::ASeq, None, 7), vec![1, 1, 2, 2, 4, 4, 7, 7]);
    }

    #[test]
    fn qeu_ou_start() {
        // (), (2), (3), (4) and (2,2)
        assert_eq!(coeffs(FamilyId::QeuOu, None, 4), vec![1, 0, 1, 1, 2]);
    }

    #[test]
    fn b_seq_is_partition_numbers_on_even_exponents() {
        let b = coeffs(FamilyId::BSeq, None, 20);
        let p = [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42];
        for (i, c) in b.iter().enumerate() {
            let want = if i % 2 == 0 { p[i / 2] } else { 0 };
            assert_eq!(*c, want, "b at {i}");
        }
    }

    #[test]
    fn p10m_at_two_is_po() {
        let order = 40;
        assert_eq!(
            build_series(FamilyId::P10m, FamilyParams::with_m(2), order).unwrap(),
            build_series(FamilyId::Po, FamilyParams::none(), order).unwrap()
        );
        assert_eq!(
            build_series(FamilyId::P01m, FamilyParams::with_m(2), order).unwrap(),
            build_series(FamilyId::Pe, FamilyParams::none(), order).unwrap()
        );
    }

    #[test]
    fn parameter_validation() {
        let e = |f, m| build_series(f, FamilyParams { m }, 5).unwrap_err();
        assert!(matches!(e(FamilyId::P10m, Some(1)), Error::Parameter(_)));
        assert!(matches!(e(FamilyId::P10m, None), Error::Parameter(_)));
        assert!(matches!(e(FamilyId::Eme, Some(0)), Error::Parameter(_)));
        assert!(matches!(e(FamilyId::DiffOmeEme, Some(2)), Error::Parameter(_)));
        assert!(matches!(e(FamilyId::DiffEmeOme, Some(3)), Error::Parameter(_)));
        assert!(matches!(e(FamilyId::Po, Some(3)), Error::Parameter(_)));
    }

    #[test]
    fn catalog_is_complete_and_ordered() {
        let cat = list_families();
        assert_eq!(cat.len(), 25);
        assert_eq!(cat[0].id, FamilyId::Po);
        assert!(cat.iter().any(|f| f.id == FamilyId::P10m && f.params == ParamKind::Modulus));
        for f in FamilyId::ALL {
            assert_eq!(f.as_str().parse::<FamilyId>().unwrap(), *f);
        }
        assert!("bogus".parse::<FamilyId>().is_err());
    }

    #[test]
    fn order_zero_builds() {
        for info in list_families() {
            let m = match info.params {
                ParamKind::None => None,
                ParamKind::MinPartEven | ParamKind::Modulus => Some(2),
                _ => Some(1),
            };
            let s = build_series(info.id, FamilyParams { m }, 0).unwrap();
            assert_eq!(s.order(), 0);
        }
    }

    #[test]
    fn transform_chains_hold_at_moderate_order() {
        for check in transform_chain_checks(60).unwrap() {
            assert!(check.result.passed, "{} failed: {:?}", check.id, check.result.first_mismatch);
        }
    }

    #[test]
    fn non_difference_families_are_nonnegative() {
        for info in list_families() {
            if info.id.as_str().starts_with("diff_") {
                continue;
            }
            let ms: Vec<Option<u32>> = match info.params {
                ParamKind::None => vec![None],
                ParamKind::Modulus => (2..=5).map(Some).collect(),
                _ => (1..=4).map(Some).collect(),
            };
            for m in ms {
                let s = build_series(info.id, FamilyParams { m }, 50).unwrap();
                assert!(
                    s.coeffs().iter().all(|c| *c >= BigInt::from(0)),
                    "{} (m={m:?}) has a negative coefficient",
                    info.id
                );
            }
        }
    }

    #[test]
    fn a_seq_pairs_and_partial_sums() {
        let order = 61;
        let a = coeffs(FamilyId::ASeq, None, order);
        let b = coeffs(FamilyId::BSeq, None, order);
        let mut run = 0;
        for n in 0..=30 {
            run += b[2 * n];
            assert_eq!(a[2 * n], a[2 * n + 1]);
            assert_eq!(a[2 * n], run);
        }
    }
}
