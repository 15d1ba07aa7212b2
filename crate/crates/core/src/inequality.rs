//! Coefficient-wise inequalities between counting sequences, and the table of
//! claims verified with them.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Disagreement, Error, Result};
use crate::genfunc::{build_series, FamilyId, FamilyParams, NamedCheck};
use crate::identities::{CheckResult, Mismatch};
use crate::oracle::{
    BiasSpec, ConstraintSpec, Oracle, OracleCaps, OracleTier, Parity, ParityFamily, Partition, SeparationMode,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Lt,
    Gt,
    Le,
    Ge,
}

impl Relation {
    pub fn holds(self, a: &BigInt, b: &BigInt) -> bool {
        match self {
            Relation::Lt => a < b,
            Relation::Gt => a > b,
            Relation::Le => a <= b,
            Relation::Ge => a >= b,
        }
    }

    pub fn is_strict(self) -> bool {
        matches!(self, Relation::Lt | Relation::Gt)
    }

    /// The relation obtained by swapping the two sides.
    pub fn flipped(self) -> Self {
        match self {
            Relation::Lt => Relation::Gt,
            Relation::Gt => Relation::Lt,
            Relation::Le => Relation::Ge,
            Relation::Ge => Relation::Le,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Relation::Lt => "lt",
            Relation::Gt => "gt",
            Relation::Le => "le",
            Relation::Ge => "ge",
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Lt => "<",
            Relation::Gt => ">",
            Relation::Le => "<=",
            Relation::Ge => ">=",
        }
    }
}

impl FromStr for Relation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lt" | "<" => Ok(Relation::Lt),
            "gt" | ">" => Ok(Relation::Gt),
            "le" | "<=" => Ok(Relation::Le),
            "ge" | ">=" => Ok(Relation::Ge),
            other => Err(Error::param(format!("unknown relation `{other}`"))),
        }
    }
}

/// `lo..=hi`, optionally restricted to one parity of `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct IndexRange {
    pub lo: usize,
    pub hi: usize,
    #[serde(serialize_with = "ser_parity")]
    pub only: Option<Parity>,
}

fn ser_parity<S: serde::Serializer>(p: &Option<Parity>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match p {
        None => s.serialize_none(),
        Some(Parity::Even) => s.serialize_str("even"),
        Some(Parity::Odd) => s.serialize_str("odd"),
    }
}

impl IndexRange {
    pub fn new(lo: usize, hi: usize) -> Self {
        IndexRange { lo, hi, only: None }
    }

    pub fn with_parity(lo: usize, hi: usize, parity: Parity) -> Self {
        IndexRange { lo, hi, only: Some(parity) }
    }

    pub fn contains(&self, n: usize) -> bool {
        n >= self.lo
            && n <= self.hi
            && match self.only {
                None => true,
                Some(Parity::Even) => n.is_multiple_of(2),
                Some(Parity::Odd) => n % 2 == 1,
            }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (self.lo..=self.hi).filter(move |&n| self.contains(n))
    }

    pub fn is_empty(&self) -> bool {
        self.iter().next().is_none()
    }
}

impl fmt::Display for IndexRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)?;
        match self.only {
            Some(Parity::Even) => write!(f, " even n"),
            Some(Parity::Odd) => write!(f, " odd n"),
            None => Ok(()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Tier {
    Series,
    Dp,
    Enum,
}

impl Tier {
    pub fn as_str(self) -> &'static str {
        match self {
            Tier::Series => "series",
            Tier::Dp => "dp",
            Tier::Enum => "enum",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub n: usize,
    #[serde(serialize_with = "crate::report::ser_bigint")]
    pub lhs: BigInt,
    #[serde(serialize_with = "crate::report::ser_bigint")]
    pub rhs: BigInt,
}

/// A point recorded for information only, with no verdict attached.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Observation {
    pub n: usize,
    #[serde(serialize_with = "crate::report::ser_bigint")]
    pub lhs: BigInt,
    #[serde(serialize_with = "crate::report::ser_bigint")]
    pub rhs: BigInt,
    pub relation_holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InequalityReport {
    pub lhs_id: String,
    pub rhs_id: String,
    pub relation: Relation,
    pub range: IndexRange,
    /// isolated indices checked in addition to `range`
    pub extra_points: Vec<usize>,
    pub holds: bool,
    /// the range contains no index at all
    pub vacuous: bool,
    pub violations: Vec<Violation>,
    /// indices where both sides are zero under a strict relation; not counted as violations
    pub vacuous_points: Vec<usize>,
    pub threshold: Option<usize>,
    pub lhs_tiers: Vec<Tier>,
    pub rhs_tiers: Vec<Tier>,
    /// every checked index was evaluated by at least two agreeing tiers on each side
    pub confirmed: bool,
    pub observations: Vec<Observation>,
}

impl InequalityReport {
    pub fn violation_indices(&self) -> Vec<usize> {
        self.violations.iter().map(|v| v.n).collect()
    }
}

fn both_zero(a: &BigInt, b: &BigInt) -> bool {
    a.is_zero() && b.is_zero()
}

/// Checks `lhs[n] relation rhs[n]` for every `n` in `range`. Under a strict
/// relation an index where both sides vanish is recorded as vacuous rather
/// than as a violation.
pub fn compare(lhs: &[BigInt], rhs: &[BigInt], relation: Relation, range: IndexRange) -> Result<InequalityReport> {
    compare_at(lhs, rhs, relation, range, &[])
}

fn compare_at(
    lhs: &[BigInt],
    rhs: &[BigInt],
    relation: Relation,
    range: IndexRange,
    extra_points: &[usize],
) -> Result<InequalityReport> {
    let len = lhs.len().min(rhs.len());
    let needed = range.iter().last().into_iter().chain(extra_points.iter().copied()).max();
    if let Some(top) = needed {
        if top >= len {
            return Err(Error::Coverage { lo: range.lo, hi: top, len });
        }
    }
    let mut points: Vec<usize> = extra_points.iter().copied().filter(|&n| !range.contains(n)).collect();
    points.extend(range.iter());
    points.sort_unstable();
    points.dedup();

    let mut violations = Vec::new();
    let mut vacuous_points = Vec::new();
    for &n in &points {
        let (a, b) = (&lhs[n], &rhs[n]);
        if relation.holds(a, b) {
            continue;
        }
        if relation.is_strict() && both_zero(a, b) {
            vacuous_points.push(n);
        } else {
            violations.push(Violation { n, lhs: a.clone(), rhs: b.clone() });
        }
    }
    let in_range = range.iter().collect::<Vec<_>>();
    let threshold = match (in_range.first(), in_range.last()) {
        (Some(&first), Some(&last)) => match violations.iter().rev().find(|v| range.contains(v.n)) {
            None => Some(first),
            Some(v) if v.n == last => None,
            Some(v) => range.iter().find(|&n| n > v.n),
        },
        _ => None,
    };
    Ok(InequalityReport {
        lhs_id: "lhs".into(),
        rhs_id: "rhs".into(),
        relation,
        range,
        extra_points: extra_points.to_vec(),
        holds: violations.is_empty(),
        vacuous: in_range.is_empty(),
        violations,
        vacuous_points,
        threshold,
        lhs_tiers: Vec::new(),
        rhs_tiers: Vec::new(),
        confirmed: false,
        observations: Vec::new(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThresholdScan {
    /// smallest `t` with the relation holding on `[t, max_n]`; absent when it fails at `max_n`
    pub threshold: Option<usize>,
    pub violations: Vec<Violation>,
    pub vacuous_points: Vec<usize>,
}

/// Scans `0..=max_n` for the point from which the relation holds throughout.
pub fn find_threshold(lhs: &[BigInt], rhs: &[BigInt], relation: Relation, max_n: usize) -> Result<ThresholdScan> {
    let r = compare(lhs, rhs, relation, IndexRange::new(0, max_n))?;
    Ok(ThresholdScan { threshold: r.threshold, violations: r.violations, vacuous_points: r.vacuous_points })
}

/// A counting sequence with up to three independent ways to compute it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quantity {
    pub label: String,
    pub scale: u32,
    pub kind: QuantityKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuantityKind {
    Bias { constraint: ConstraintSpec, bias: BiasSpec, series: Option<(FamilyId, FamilyParams)> },
    Parity { m: u32, which: ParityFamily },
    Separated { mode: SeparationMode, non_unitary: bool, series: FamilyId },
}

impl Quantity {
    pub fn new(label: impl Into<String>, kind: QuantityKind) -> Self {
        Quantity { label: label.into(), scale: 1, kind }
    }

    pub fn scaled(mut self, k: u32) -> Self {
        self.scale = k;
        self.label = format!("{k}*{}", self.label);
        self
    }

    fn series_family(&self) -> Option<(FamilyId, FamilyParams)> {
        match &self.kind {
            QuantityKind::Bias { series, .. } => *series,
            QuantityKind::Parity { m, which } => {
                let f = match which {
                    ParityFamily::EMe => FamilyId::Eme,
                    ParityFamily::OMe => FamilyId::Ome,
                    ParityFamily::EMo => FamilyId::Emo,
                    ParityFamily::OMo => FamilyId::Omo,
                };
                Some((f, FamilyParams::with_m(*m)))
            }
            QuantityKind::Separated { series, .. } => Some((*series, FamilyParams::none())),
        }
    }

    fn tier_values(&self, tier: Tier, limit: usize, oracle: &Oracle) -> Result<Option<Vec<BigInt>>> {
        let raw: Vec<BigInt> = match (tier, &self.kind) {
            (Tier::Series, _) => match self.series_family() {
                Some((f, p)) => build_series(f, p, limit)?.into_coeffs(),
                None => return Ok(None),
            },
            (Tier::Dp, QuantityKind::Bias { constraint, bias, .. }) => {
                to_signed(oracle.bias_table_dp(limit, constraint, *bias)?.more_j)
            }
            (Tier::Enum, QuantityKind::Bias { constraint, bias, .. }) => {
                to_signed(oracle.bias_table_enum(limit, constraint, *bias)?.more_j)
            }
            (Tier::Dp | Tier::Enum, QuantityKind::Parity { m, which }) => {
                to_signed(oracle.parity_table(limit, *m, *which, oracle_tier(tier))?)
            }
            (Tier::Dp | Tier::Enum, QuantityKind::Separated { mode, non_unitary, .. }) => {
                to_signed(oracle.separated_table(limit, *mode, *non_unitary, oracle_tier(tier))?)
            }
        };
        let k = BigInt::from(self.scale);
        Ok(Some(if self.scale == 1 { raw } else { raw.into_iter().map(|v| v * &k).collect() }))
    }
}

fn oracle_tier(t: Tier) -> OracleTier {
    if t == Tier::Enum {
        OracleTier::Enum
    } else {
        OracleTier::Dp
    }
}

fn to_signed(v: Vec<num_bigint::BigUint>) -> Vec<BigInt> {
    v.into_iter().map(BigInt::from).collect()
}

/// A sequence assembled from every tier that covers each index.
#[derive(Clone, Debug)]
pub struct Evaluated {
    pub values: Vec<BigInt>,
    pub tiers: Vec<Tier>,
    /// number of tiers covering each index
    pub coverage: Vec<usize>,
}

/// Evaluates `q` on `0..=max_n` with each available tier (series to `order`,
/// DP and enumeration to their caps) and fails on the first index where two
/// tiers disagree.
pub fn evaluate(q: &Quantity, max_n: usize, order: usize, caps: OracleCaps) -> Result<Evaluated> {
    let oracle = Oracle::new(caps);
    let mut tables: Vec<(Tier, Vec<BigInt>)> = Vec::new();
    for (tier, cap) in [(Tier::Series, order), (Tier::Dp, caps.dp_cap), (Tier::Enum, caps.enum_cap)] {
        let limit = cap.min(max_n);
        if let Some(v) = q.tier_values(tier, limit, &oracle)? {
            tables.push((tier, v));
        }
    }
    let mut first: Option<Error> = None;
    let mut first_n = usize::MAX;
    for (i, (ta, va)) in tables.iter().enumerate() {
        for (tb, vb) in &tables[i + 1..] {
            if let Some(n) = va.iter().zip(vb).position(|(a, b)| a != b) {
                if n < first_n {
                    first_n = n;
                    first = Some(Error::TierDisagreement(Box::new(Disagreement {
                        quantity: q.label.clone(),
                        n,
                        tier_a: ta.as_str().into(),
                        value_a: va[n].clone(),
                        tier_b: tb.as_str().into(),
                        value_b: vb[n].clone(),
                    })));
                }
            }
        }
    }
    if let Some(e) = first {
        return Err(e);
    }
    let len = tables.iter().map(|(_, v)| v.len()).max().unwrap_or(0);
    let mut values = Vec::with_capacity(len);
    let mut coverage = Vec::with_capacity(len);
    for n in 0..len {
        let covering: Vec<&BigInt> = tables.iter().filter_map(|(_, v)| v.get(n)).collect();
        values.push(covering[0].clone());
        coverage.push(covering.len());
    }
    Ok(Evaluated { values, tiers: tables.iter().map(|(t, _)| *t).collect(), coverage })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoremId {
    ThmReverse1,
    ThmReverse2,
    ThmReverse3,
    ThmMm,
    ThmKimNew,
    ThmMinpartEven,
    ThmMinpartOdd,
    ThmPeu,
    ThmQeu,
    Conj32,
    KimkimOriginal,
}

impl TheoremId {
    pub const ALL: &'static [TheoremId] = &[
        TheoremId::ThmReverse1,
        TheoremId::ThmReverse2,
        TheoremId::ThmReverse3,
        TheoremId::ThmMm,
        TheoremId::ThmKimNew,
        TheoremId::ThmMinpartEven,
        TheoremId::ThmMinpartOdd,
        TheoremId::ThmPeu,
        TheoremId::ThmQeu,
        TheoremId::Conj32,
        TheoremId::KimkimOriginal,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::ThmReverse1 => "thm_reverse_1",
            TheoremId::ThmReverse2 => "thm_reverse_2",
            TheoremId::ThmReverse3 => "thm_reverse_3",
            TheoremId::ThmMm => "thm_mm",
            TheoremId::ThmKimNew => "thm_kim_new",
            TheoremId::ThmMinpartEven => "thm_minpart_even",
            TheoremId::ThmMinpartOdd => "thm_minpart_odd",
            TheoremId::ThmPeu => "thm_peu",
            TheoremId::ThmQeu => "thm_qeu",
            TheoremId::Conj32 => "conj_3_2",
            TheoremId::KimkimOriginal => "kimkim_original",
        }
    }

    pub fn needs_m(self) -> bool {
        matches!(
            self,
            TheoremId::ThmKimNew | TheoremId::ThmMinpartEven | TheoremId::ThmMinpartOdd | TheoremId::KimkimOriginal
        )
    }

    /// Whether the claim is a conjecture rather than a theorem.
    pub fn is_conjecture(self) -> bool {
        self == TheoremId::Conj32
    }

    pub fn statement(self) -> &'static str {
        match self {
            TheoremId::ThmReverse1 => "p_o(n) < p_e(n) with part 1 forbidden, n >= 8",
            TheoremId::ThmReverse2 => "p_o(n) > p_e(n) with part 2 forbidden, n >= 1",
            TheoremId::ThmReverse3 => "p_o(n) > p_e(n) with parts 1 and 2 forbidden, n >= 9",
            TheoremId::ThmMm => "q_o(n) < q_e(n) for non-unitary partitions, n >= 8",
            TheoremId::ThmKimNew => "q_{0,1,m}(n) > q_{1,0,m}(n), n >= 4m+3 and n = 4m",
            TheoremId::ThmMinpartEven => {
                "parts >= m, even counts of each parity: odd m favours odd parts, even m favours even parts; even n >= 2m"
            }
            TheoremId::ThmMinpartOdd => {
                "parts >= m, odd counts of each parity: odd m favours odd parts, even m favours even parts; odd n >= m"
            }
            TheoremId::ThmPeu => "odd-below-even beats even-below-odd, n >= 7",
            TheoremId::ThmQeu => "non-unitary odd-below-even is beaten by even-below-odd, n >= 4",
            TheoremId::Conj32 => "3 q_o(n) < 2 q_e(n), n >= 10",
            TheoremId::KimkimOriginal => "p_{1,0,m}(n) > p_{0,1,m}(n) for ordinary partitions, n >= m^2-m+1",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TheoremId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        TheoremId::ALL
            .iter()
            .copied()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::param(format!("unknown theorem `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct TheoremSpec {
    pub id: TheoremId,
    pub m: Option<u32>,
}

impl TheoremSpec {
    pub fn new(id: TheoremId, m: Option<u32>) -> Result<Self> {
        let spec = TheoremSpec { id, m };
        match (id.needs_m(), m) {
            (false, None) => {}
            (false, Some(_)) => return Err(Error::param(format!("{id} takes no parameter m"))),
            (true, None) => return Err(Error::param(format!("{id} requires --m"))),
            (true, Some(m)) => {
                let min = if matches!(id, TheoremId::ThmMinpartEven | TheoremId::ThmMinpartOdd) { 1 } else { 2 };
                if m < min {
                    return Err(Error::param(format!("{id} requires m >= {min}")));
                }
            }
        }
        Ok(spec)
    }

    fn m(&self) -> u32 {
        self.m.unwrap_or(0)
    }

    /// Where the claimed range starts.
    pub fn claimed_range_lo(&self) -> usize {
        let m = self.m() as usize;
        match self.id {
            TheoremId::ThmMm | TheoremId::ThmReverse1 => 8,
            TheoremId::ThmKimNew => 4 * m + 3,
            TheoremId::ThmPeu => 7,
            TheoremId::ThmQeu => 4,
            TheoremId::Conj32 => 10,
            TheoremId::KimkimOriginal => m * m - m + 1,
            TheoremId::ThmReverse2 => 1,
            TheoremId::ThmReverse3 => 9,
            TheoremId::ThmMinpartEven => 2 * m,
            TheoremId::ThmMinpartOdd => m | 1,
        }
    }

    fn parity_filter(&self) -> Option<Parity> {
        match self.id {
            TheoremId::ThmMinpartEven => Some(Parity::Even),
            TheoremId::ThmMinpartOdd => Some(Parity::Odd),
            _ => None,
        }
    }

    pub fn label(&self) -> String {
        match self.m {
            Some(m) => format!("{}[m={m}]", self.id),
            None => self.id.to_string(),
        }
    }

    /// The two sides and the relation between them.
    pub fn sides(&self) -> (Quantity, Quantity, Relation) {
        use QuantityKind::*;
        let m = self.m();
        let bias = |label: &str, c: ConstraintSpec, b: BiasSpec, series: Option<(FamilyId, FamilyParams)>| {
            Quantity::new(label, Bias { constraint: c, bias: b, series })
        };
        let none = FamilyParams::none();
        let odd = BiasSpec::odd_over_even();
        let even = BiasSpec::even_over_odd();
        let nu = ConstraintSpec::non_unitary;
        match self.id {
            TheoremId::ThmMm | TheoremId::ThmReverse1 => (
                bias("q_o", nu(), odd, Some((FamilyId::Po, none))),
                bias("q_e", nu(), even, Some((FamilyId::Pe, none))),
                Relation::Lt,
            ),
            TheoremId::Conj32 => (
                bias("q_o", nu(), odd, Some((FamilyId::Po, none))).scaled(3),
                bias("q_e", nu(), even, Some((FamilyId::Pe, none))).scaled(2),
                Relation::Lt,
            ),
            TheoremId::ThmReverse2 | TheoremId::ThmReverse3 => {
                let (c, tag) = if self.id == TheoremId::ThmReverse2 {
                    (ConstraintSpec::ordinary().forbid([2]), "{2}")
                } else {
                    (ConstraintSpec::ordinary().forbid([1, 2]), "{1,2}")
                };
                (
                    bias(&format!("p_o^{tag}"), c.clone(), odd, None),
                    bias(&format!("p_e^{tag}"), c, even, None),
                    Relation::Gt,
                )
            }
            TheoremId::ThmKimNew => {
                let p = FamilyParams::with_m(m);
                (
                    bias(
                        &format!("q_{{0,1,{m}}}"),
                        nu(),
                        BiasSpec::new(0, 1, m).expect("m >= 2"),
                        Some((FamilyId::P01m, p)),
                    ),
                    bias(
                        &format!("q_{{1,0,{m}}}"),
                        nu(),
                        BiasSpec::new(1, 0, m).expect("m >= 2"),
                        Some((FamilyId::P10m, p)),
                    ),
                    Relation::Gt,
                )
            }
            TheoremId::KimkimOriginal => {
                let c = ConstraintSpec::ordinary();
                (
                    bias(&format!("p_{{1,0,{m}}}"), c.clone(), BiasSpec::new(1, 0, m).expect("m >= 2"), None),
                    bias(&format!("p_{{0,1,{m}}}"), c, BiasSpec::new(0, 1, m).expect("m >= 2"), None),
                    Relation::Gt,
                )
            }
            TheoremId::ThmMinpartEven | TheoremId::ThmMinpartOdd => {
                let (e, o, tag) = if self.id == TheoremId::ThmMinpartEven {
                    (ParityFamily::EMe, ParityFamily::OMe, "me")
                } else {
                    (ParityFamily::EMo, ParityFamily::OMo, "mo")
                };
                let eq = Quantity::new(format!("E_{tag}[m={m}]"), Parity { m, which: e });
                let oq = Quantity::new(format!("O_{tag}[m={m}]"), Parity { m, which: o });
                if m % 2 == 1 {
                    (oq, eq, Relation::Gt)
                } else {
                    (eq, oq, Relation::Gt)
                }
            }
            TheoremId::ThmPeu => (
                Quantity::new(
                    "p_ou^eu",
                    Separated { mode: SeparationMode::OddBelowEven, non_unitary: false, series: FamilyId::PouEu },
                ),
                Quantity::new(
                    "p_eu^ou",
                    Separated { mode: SeparationMode::EvenBelowOdd, non_unitary: false, series: FamilyId::PeuOu },
                ),
                Relation::Gt,
            ),
            TheoremId::ThmQeu => (
                Quantity::new(
                    "q_ou^eu",
                    Separated { mode: SeparationMode::OddBelowEven, non_unitary: true, series: FamilyId::QouEu },
                ),
                Quantity::new(
                    "q_eu^ou",
                    Separated { mode: SeparationMode::EvenBelowOdd, non_unitary: true, series: FamilyId::QeuOu },
                ),
                Relation::Lt,
            ),
        }
    }

    /// Every claim with the parameter values it is checked for, in a fixed order.
    pub fn catalog() -> Vec<TheoremSpec> {
        let mut out = Vec::new();
        for &id in TheoremId::ALL {
            let ms: Vec<Option<u32>> = match id {
                TheoremId::ThmKimNew => (2..=6).map(Some).collect(),
                TheoremId::KimkimOriginal => (2..=5).map(Some).collect(),
                TheoremId::ThmMinpartEven | TheoremId::ThmMinpartOdd => (1..=5).map(Some).collect(),
                _ => vec![None],
            };
            out.extend(ms.into_iter().map(|m| TheoremSpec { id, m }));
        }
        out
    }
}

/// Verifies `spec` on its claimed range, cut at `max_n`.
pub fn verify_theorem(spec: &TheoremSpec, max_n: usize, order: usize, caps: OracleCaps) -> Result<InequalityReport> {
    verify_theorem_from(spec, None, max_n, order, caps)
}

/// As [`verify_theorem`], with the start of the range overridden by `from`.
pub fn verify_theorem_from(
    spec: &TheoremSpec,
    from: Option<usize>,
    max_n: usize,
    order: usize,
    caps: OracleCaps,
) -> Result<InequalityReport> {
    let (lq, rq, relation) = spec.sides();
    let lo = from.unwrap_or_else(|| spec.claimed_range_lo());
    let range = IndexRange { lo, hi: max_n, only: spec.parity_filter() };
    let lhs = evaluate(&lq, max_n, order, caps)?;
    let rhs = evaluate(&rq, max_n, order, caps)?;

    let mut extra = Vec::new();
    let mut observe = Vec::new();
    if spec.id == TheoremId::ThmKimNew {
        let m = spec.m() as usize;
        if 4 * m <= max_n {
            extra.push(4 * m);
        }
        observe.extend([4 * m + 1, 4 * m + 2].into_iter().filter(|&n| n <= max_n));
    }
    let mut report = compare_at(&lhs.values, &rhs.values, relation, range, &extra)?;
    report.lhs_id = lq.label;
    report.rhs_id = rq.label;
    report.lhs_tiers = lhs.tiers;
    report.rhs_tiers = rhs.tiers;
    report.confirmed = range.iter().chain(extra.iter().copied()).all(|n| lhs.coverage[n] >= 2 && rhs.coverage[n] >= 2);
    report.observations = observe
        .into_iter()
        .map(|n| Observation {
            n,
            lhs: lhs.values[n].clone(),
            rhs: rhs.values[n].clone(),
            relation_holds: relation.holds(&lhs.values[n], &rhs.values[n]),
        })
        .collect();
    Ok(report)
}

/// Compares `q_{a,b,m}` with `q_{b,a,m}` for every `1 <= a < b <= m`, with no
/// verdict: the records describe where `q_{a,b,m} < q_{b,a,m}` holds.
pub fn reversed_bias_scan(m: u32, max_n: usize, caps: OracleCaps) -> Result<Vec<(String, ThresholdScan)>> {
    if m < 2 {
        return Err(Error::param("modulus must be at least 2"));
    }
    let oracle = Oracle::new(caps);
    let mut out = Vec::new();
    for a in 1..m {
        for b in a + 1..=m {
            let spec = BiasSpec::new(a % m, b % m, m)?;
            let t = oracle.bias_table_dp(max_n, &ConstraintSpec::non_unitary(), spec)?;
            let scan = find_threshold(&to_signed(t.more_j), &to_signed(t.more_k), Relation::Lt, max_n)?;
            out.push((format!("q_{{{a},{b},{m}}} < q_{{{b},{a},{m}}}"), scan));
        }
    }
    Ok(out)
}

/// The injection used to compare partitions into even parts with smaller ones:
/// `(2n)` goes to `(2n-4)`, `(2,...,2)` to `(2n-6)`, anything else loses its
/// largest part.
pub fn phi_map(p: &Partition, two_n: u64) -> Result<Partition> {
    if two_n == 0 || two_n % 2 == 1 {
        return Err(Error::Domain(format!("{two_n} is not a positive even number")));
    }
    if p.sum() != two_n {
        return Err(Error::Domain(format!("{p} is not a partition of {two_n}")));
    }
    if p.parts().iter().any(|&x| x % 2 == 1) {
        return Err(Error::Domain(format!("{p} has an odd part")));
    }
    if p.parts().iter().all(|&x| x == 2) {
        if two_n <= 6 {
            return Err(Error::Domain(format!("all-twos partition of {two_n} has no image")));
        }
        return Partition::new(vec![(two_n - 6) as u32]);
    }
    if p.len() == 1 {
        let rest = two_n - 4;
        return Partition::new(if rest == 0 { vec![] } else { vec![rest as u32] });
    }
    Ok(p.without_largest())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PhiCheck {
    pub two_n: u64,
    pub passed: bool,
    pub domain_size: usize,
    /// two partitions with the same image
    pub collision: Option<(String, String)>,
    /// a partition whose image has weight above `2n - 4`
    pub out_of_range: Option<String>,
}

/// Applies [`phi_map`] to every partition of `two_n` into even parts and checks
/// that the images are distinct and have weight at most `two_n - 4`.
pub fn verify_phi_injective(two_n: u64, caps: OracleCaps) -> Result<PhiCheck> {
    if two_n % 2 == 1 {
        return Err(Error::Domain(format!("{two_n} is odd")));
    }
    let half = (two_n / 2) as usize;
    let halves = Oracle::new(caps).enumerate(half, &ConstraintSpec::ordinary())?;
    let mut seen: HashMap<Partition, Partition> = HashMap::new();
    let mut collision = None;
    let mut out_of_range = None;
    for h in &halves {
        let p = Partition::new(h.parts().iter().map(|x| 2 * x).collect())?;
        let image = phi_map(&p, two_n)?;
        if image.sum() + 4 > two_n && out_of_range.is_none() {
            out_of_range = Some(p.to_string());
        }
        if let Some(prev) = seen.get(&image) {
            if collision.is_none() {
                collision = Some((prev.to_string(), p.to_string()));
            }
        } else {
            seen.insert(image, p);
        }
    }
    Ok(PhiCheck {
        two_n,
        passed: collision.is_none() && out_of_range.is_none(),
        domain_size: halves.len(),
        collision,
        out_of_range,
    })
}

/// `b_{2n}` for `0 <= n <= max_n`.
fn b_even(max_n: usize) -> Result<Vec<BigInt>> {
    let b = build_series(FamilyId::BSeq, FamilyParams::none(), 2 * max_n)?;
    Ok(b.coeffs().iter().step_by(2).cloned().collect())
}

/// The two inequalities on `b_{2n}` that imply the odd-below-even bias:
/// `sum_{i<=n-2} b_{2i} > b_{2n}` and `b_{2n-4}+b_{2n-6}+b_{2n-8}+b_{2n-10} > b_{2n}`, for `7 <= n <= max_n`.
pub fn verify_b_inequalities(max_n: usize) -> Result<(InequalityReport, InequalityReport)> {
    let b = b_even(max_n)?;
    let at = |i: isize| if i < 0 { BigInt::zero() } else { b[i as usize].clone() };
    let mut prefix = vec![BigInt::zero(); max_n + 1];
    let mut run = BigInt::zero();
    for n in 0..=max_n {
        // prefix[n] = sum_{i <= n-2} b_{2i}
        prefix[n] = run.clone();
        if n >= 1 {
            run += &b[n - 1];
        }
    }
    let range = IndexRange::new(7, max_n);
    let mut r1 = compare(&prefix, &b, Relation::Gt, range)?;
    r1.lhs_id = "sum_{i<=n-2} b_{2i}".into();
    r1.rhs_id = "b_{2n}".into();
    let four: Vec<BigInt> = (0..=max_n as isize).map(|n| at(n - 2) + at(n - 3) + at(n - 4) + at(n - 5)).collect();
    let mut r2 = compare(&four, &b, Relation::Gt, range)?;
    r2.lhs_id = "b_{2n-4}+b_{2n-6}+b_{2n-8}+b_{2n-10}".into();
    r2.rhs_id = "b_{2n}".into();
    for r in [&mut r1, &mut r2] {
        r.lhs_tiers = vec![Tier::Series];
        r.rhs_tiers = vec![Tier::Series];
    }
    Ok((r1, r2))
}

fn equality_check(id: &str, lhs: &[BigInt], rhs: &[BigInt]) -> NamedCheck {
    let first_mismatch = lhs.iter().zip(rhs).position(|(a, b)| a != b).map(|i| Mismatch {
        exponent: i,
        lhs: lhs[i].clone(),
        rhs: rhs[i].clone(),
    });
    NamedCheck {
        id: id.into(),
        result: CheckResult {
            passed: first_mismatch.is_none(),
            verified_order: lhs.len().min(rhs.len()).saturating_sub(1),
            first_mismatch,
        },
    }
}

/// `a_{2n} = a_{2n+1}` and `a_{2n} = sum_{i<=n} b_{2i}` for `n <= max_n`.
/// Mismatch positions are reported as `n`.
pub fn verify_a_facts(max_n: usize) -> Result<Vec<NamedCheck>> {
    let a = build_series(FamilyId::ASeq, FamilyParams::none(), 2 * max_n + 1)?;
    let even: Vec<BigInt> = a.coeffs().iter().step_by(2).cloned().collect();
    let odd: Vec<BigInt> = a.coeffs().iter().skip(1).step_by(2).cloned().collect();
    let b = b_even(max_n)?;
    let sums: Vec<BigInt> = b
        .iter()
        .scan(BigInt::zero(), |acc, x| {
            *acc += x;
            Some(acc.clone())
        })
        .collect();
    Ok(vec![
        equality_check("a_{2n} = a_{2n+1}", &even, &odd),
        equality_check("a_{2n} = sum_{i<=n} b_{2i}", &even, &sums),
    ])
}

/// Nonnegativity of the even-index coefficients of `2pe - 3po`, read from
/// its single-sum form.
pub fn verify_even_closed_form(order: usize) -> Result<InequalityReport> {
    let d = build_series(FamilyId::Diff2Pe3Po, FamilyParams::none(), order)?;
    let zeros = vec![BigInt::zero(); order + 1];
    let mut r = compare(d.coeffs(), &zeros, Relation::Ge, IndexRange::with_parity(0, order, Parity::Even))?;
    r.lhs_id = "diff_2pe_3po".into();
    r.rhs_id = "0".into();
    r.lhs_tiers = vec![Tier::Series];
    Ok(r)
}

/// The signed difference `lhs - rhs` of a theorem's two sides, for display.
pub fn difference(lhs: &[BigInt], rhs: &[BigInt]) -> Vec<BigInt> {
    lhs.iter().zip(rhs).map(|(a, b)| a - b).collect()
}

/// Number of indices where the difference is negative, zero, positive.
pub fn sign_profile(d: &[BigInt]) -> (usize, usize, usize) {
    d.iter().fold((0, 0, 0), |(neg, zero, pos), x| {
        if x.is_negative() {
            (neg + 1, zero, pos)
        } else if x.is_zero() {
            (neg, zero + 1, pos)
        } else {
            (neg, zero, pos + 1)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn series(f: FamilyId, order: usize) -> Vec<BigInt> {
        build_series(f, FamilyParams::none(), order).unwrap().into_coeffs()
    }

    fn caps() -> OracleCaps {
        OracleCaps::default()
    }

    fn spec(id: TheoremId, m: Option<u32>) -> TheoremSpec {
        TheoremSpec::new(id, m).unwrap()
    }

    #[test]
    fn pe_po_violations_in_small_range() {
        let (pe, po) = (series(FamilyId::Pe, 8), series(FamilyId::Po, 8));
        let r = compare(&pe, &po, Relation::Gt, IndexRange::new(2, 8)).unwrap();
        assert_eq!(r.violation_indices(), vec![3, 5, 7]);
        assert!(!r.holds);
        let r = compare(&pe, &po, Relation::Gt, IndexRange::new(8, 8)).unwrap();
        assert!(r.holds);
        assert_eq!(r.threshold, Some(8));
    }

    #[test]
    fn strict_relation_on_equal_sequences_fails_everywhere() {
        let x = ints(&[3, 1, 4, 1, 5, 9, 2, 6]);
        let r = compare(&x, &x, Relation::Gt, IndexRange::new(0, 7)).unwrap();
        assert_eq!(r.violation_indices(), (0..=7).collect::<Vec<_>>());
        assert_eq!(r.threshold, None);
        assert!(compare(&x, &x, Relation::Ge, IndexRange::new(0, 7)).unwrap().holds);
    }

    #[test]
    fn coverage_error() {
        let x = ints(&[1, 2, 3]);
        assert_eq!(
            compare(&x, &x, Relation::Ge, IndexRange::new(0, 5)).unwrap_err(),
            Error::Coverage { lo: 0, hi: 5, len: 3 }
        );
    }

    #[test]
    fn thresholds_recover_claimed_starts() {
        let (pe, po) = (series(FamilyId::Pe, 300), series(FamilyId::Po, 300));
        let t = find_threshold(&pe, &po, Relation::Gt, 300).unwrap();
        assert_eq!(t.threshold, Some(8));
        assert_eq!(t.violations.iter().map(|v| v.n).collect::<Vec<_>>(), vec![3, 5, 7]);
        assert_eq!(t.vacuous_points, vec![0, 1]);

        let (qeu, qou) = (series(FamilyId::QeuOu, 200), series(FamilyId::QouEu, 200));
        assert_eq!(find_threshold(&qeu, &qou, Relation::Gt, 200).unwrap().threshold, Some(4));
        let (pou, peu) = (series(FamilyId::PouEu, 200), series(FamilyId::PeuOu, 200));
        assert_eq!(find_threshold(&pou, &peu, Relation::Gt, 200).unwrap().threshold, Some(7));
    }

    #[test]
    fn thm_mm_with_dp_past_series_order() {
        let r = verify_theorem(&spec(TheoremId::ThmMm, None), 300, 120, caps()).unwrap();
        assert!(r.holds);
        assert_eq!(r.range, IndexRange::new(8, 300));
        assert_eq!(r.lhs_tiers, vec![Tier::Series, Tier::Dp, Tier::Enum]);
        assert!(!r.confirmed, "indices above the series order have one tier only");
        let r = verify_theorem_from(&spec(TheoremId::ThmMm, None), Some(1), 6, 200, caps()).unwrap();
        assert_eq!(r.violation_indices(), vec![3, 5]);
        assert_eq!(r.vacuous_points, vec![1]);
    }

    #[test]
    fn kim_new_small_m() {
        let r = verify_theorem(&spec(TheoremId::ThmKimNew, Some(2)), 60, 60, caps()).unwrap();
        assert!(r.holds);
        assert!(r.confirmed);
        assert_eq!(r.range.lo, 11);
        assert_eq!(r.extra_points, vec![8]);
        assert_eq!(r.observations.len(), 2);
    }

    #[test]
    fn kim_new_empty_range_is_vacuous() {
        let r = verify_theorem(&spec(TheoremId::ThmKimNew, Some(2)), 10, 10, caps()).unwrap();
        assert!(r.vacuous && r.holds);
        assert_eq!(r.threshold, None);
    }

    #[test]
    fn reverse_two_from_one() {
        let r = verify_theorem(&spec(TheoremId::ThmReverse2, None), 100, 100, caps()).unwrap();
        assert!(r.holds);
        assert_eq!(r.lhs_tiers, vec![Tier::Dp, Tier::Enum]);
    }

    #[test]
    fn separated_theorems() {
        assert!(verify_theorem(&spec(TheoremId::ThmQeu, None), 120, 120, caps()).unwrap().holds);
        assert!(verify_theorem(&spec(TheoremId::ThmPeu, None), 120, 120, caps()).unwrap().holds);
    }

    #[test]
    fn theorem_spec_validation() {
        assert!(TheoremSpec::new(TheoremId::ThmMm, Some(3)).is_err());
        assert!(TheoremSpec::new(TheoremId::ThmKimNew, None).is_err());
        assert!(TheoremSpec::new(TheoremId::ThmKimNew, Some(1)).is_err());
        assert!(TheoremSpec::new(TheoremId::ThmMinpartOdd, Some(1)).is_ok());
        assert!("bogus_id".parse::<TheoremId>().is_err());
        assert_eq!(spec(TheoremId::KimkimOriginal, Some(4)).claimed_range_lo(), 13);
        assert_eq!(spec(TheoremId::ThmMinpartOdd, Some(4)).claimed_range_lo(), 5);
        assert_eq!(TheoremSpec::catalog().len(), 6 + 5 + 5 + 5 + 5);
    }

    #[test]
    fn tier_disagreement_is_detected() {
        let q = Quantity::new(
            "po vs pe",
            QuantityKind::Bias {
                constraint: ConstraintSpec::non_unitary(),
                bias: BiasSpec::odd_over_even(),
                series: Some((FamilyId::Pe, FamilyParams::none())),
            },
        );
        match evaluate(&q, 20, 20, caps()).unwrap_err() {
            Error::TierDisagreement(d) => assert_eq!(d.n, 2),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn phi_examples() {
        let p = |v: &[u32]| Partition::new(v.to_vec()).unwrap();
        assert_eq!(phi_map(&p(&[14]), 14).unwrap(), p(&[10]));
        assert_eq!(phi_map(&p(&[2; 7]), 14).unwrap(), p(&[8]));
        assert_eq!(phi_map(&p(&[8, 6]), 14).unwrap(), p(&[6]));
        assert_eq!(phi_map(&p(&[4]), 4).unwrap(), Partition::empty());
        assert!(matches!(phi_map(&p(&[2]), 2), Err(Error::Domain(_))));
        assert!(matches!(phi_map(&p(&[3, 1]), 4), Err(Error::Domain(_))));
        assert!(matches!(verify_phi_injective(2, caps()), Err(Error::Domain(_))));
    }

    #[test]
    fn phi_injective() {
        let c = verify_phi_injective(14, caps()).unwrap();
        assert!(c.passed);
        assert_eq!(c.domain_size, 15);
        let c = verify_phi_injective(10, caps()).unwrap();
        assert!(!c.passed);
        assert!(c.collision.is_some());
    }

    #[test]
    fn b_inequalities_first_values() {
        let (r1, r2) = verify_b_inequalities(60).unwrap();
        assert!(r1.holds && r2.holds);
        let b = b_even(7).unwrap();
        assert_eq!(b[7], BigInt::from(15));
        assert_eq!(&b[5] + &b[4] + &b[3] + &b[2], BigInt::from(17));
        assert_eq!(b[..=5].iter().sum::<BigInt>(), BigInt::from(19));
    }

    #[test]
    fn a_facts_hold() {
        assert!(verify_a_facts(60).unwrap().iter().all(|c| c.result.passed));
    }

    #[test]
    fn even_closed_form_nonnegative() {
        assert!(verify_even_closed_form(80).unwrap().holds);
    }

    proptest! {
        #[test]
        fn compare_is_antisymmetric(
            a in prop::collection::vec(0i64..6, 12),
            b in prop::collection::vec(0i64..6, 12),
            lo in 0usize..6,
            rel in prop_oneof![Just(Relation::Lt), Just(Relation::Gt), Just(Relation::Le), Just(Relation::Ge)],
        ) {
            let (a, b) = (ints(&a), ints(&b));
            let range = IndexRange::new(lo, 11);
            let r = compare(&a, &b, rel, range).unwrap();
            let s = compare(&b, &a, rel.flipped(), range).unwrap();
            prop_assert_eq!(r.holds, s.holds);
            prop_assert_eq!(r.threshold, s.threshold);
            prop_assert_eq!(&r.vacuous_points, &s.vacuous_points);
            prop_assert_eq!(r.violations.len(), s.violations.len());
            for (x, y) in r.violations.iter().zip(&s.violations) {
                prop_assert_eq!((x.n, &x.lhs, &x.rhs), (y.n, &y.rhs, &y.lhs));
            }
            prop_assert_eq!(r.holds, r.violations.is_empty());
            prop_assert!(r.violations.iter().all(|v| range.contains(v.n)));
            if let Some(t) = r.threshold {
                prop_assert!(t <= range.hi);
            }
        }

        #[test]
        fn phi_image_weight(n in 7u64..=18) {
            let two_n = 2 * n;
            for h in Oracle::default().enumerate(n as usize, &ConstraintSpec::ordinary()).unwrap() {
                let p = Partition::new(h.parts().iter().map(|x| 2 * x).collect()).unwrap();
                let img = phi_map(&p, two_n).unwrap();
                let expected = if p.parts().iter().all(|&x| x == 2) {
                    two_n - 6
                } else if p.len() == 1 {
                    two_n - 4
                } else {
                    two_n - u64::from(p.largest().unwrap())
                };
                prop_assert_eq!(img.sum(), expected);
            }
        }
    }
}
