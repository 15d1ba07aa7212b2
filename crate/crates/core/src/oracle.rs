//! Ground-truth partition counts computed without any q-series machinery.
//!
//! Two tiers: exhaustive enumeration (slow, obviously correct) and dynamic
//! programming over part sizes (fast, still independent of the series code).
//! Both refuse inputs above their configured caps.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub const DEFAULT_ENUM_CAP: usize = 40;
pub const DEFAULT_DP_CAP: usize = 300;
pub const ENUM_CAP_VAR: &str = "PB_ENUM_CAP";
pub const DP_CAP_VAR: &str = "PB_DP_CAP";

/// A non-increasing sequence of positive integers.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Sorts `parts` into non-increasing order; zero parts are rejected.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::Domain("partition parts must be positive".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition { parts })
    }

    pub fn empty() -> Self {
        Partition::default()
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn sum(&self) -> u64 {
        self.parts.iter().map(|&p| u64::from(p)).sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn largest(&self) -> Option<u32> {
        self.parts.first().copied()
    }

    pub fn without_largest(&self) -> Partition {
        Partition { parts: self.parts.get(1..).unwrap_or_default().to_vec() }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.parts.iter().map(u32::to_string).collect();
        write!(f, "({})", body.join(","))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    fn matches(self, count: usize) -> bool {
        count.is_multiple_of(2) == (self == Parity::Even)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum SeparationMode {
    #[default]
    Ordinary,
    /// every even part is smaller than every odd part
    EvenBelowOdd,
    /// every odd part is smaller than every even part
    OddBelowEven,
}

impl SeparationMode {
    pub fn as_str(self) -> &'static str {
        match self {
            SeparationMode::Ordinary => "ordinary",
            SeparationMode::EvenBelowOdd => "even_below_odd",
            SeparationMode::OddBelowEven => "odd_below_even",
        }
    }
}

impl FromStr for SeparationMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ordinary" => Ok(SeparationMode::Ordinary),
            "even_below_odd" => Ok(SeparationMode::EvenBelowOdd),
            "odd_below_even" => Ok(SeparationMode::OddBelowEven),
            other => Err(Error::param(format!("unknown mode `{other}`"))),
        }
    }
}

/// Which partitions of `n` are admitted.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConstraintSpec {
    pub min_part: u32,
    pub forbidden_parts: BTreeSet<u32>,
    pub mode: SeparationMode,
    /// required parities of (#even parts, #odd parts)
    pub count_parity: Option<(Parity, Parity)>,
    /// drop partitions without odd parts (the empty partition included)
    pub all_even_excluded: bool,
}

impl Default for ConstraintSpec {
    fn default() -> Self {
        ConstraintSpec {
            min_part: 1,
            forbidden_parts: BTreeSet::new(),
            mode: SeparationMode::Ordinary,
            count_parity: None,
            all_even_excluded: false,
        }
    }
}

impl ConstraintSpec {
    pub fn ordinary() -> Self {
        Self::default()
    }

    pub fn non_unitary() -> Self {
        Self::default().with_min_part(2)
    }

    pub fn with_min_part(mut self, m: u32) -> Self {
        self.min_part = m;
        self
    }

    pub fn forbid(mut self, parts: impl IntoIterator<Item = u32>) -> Self {
        self.forbidden_parts.extend(parts);
        self
    }

    pub fn with_mode(mut self, mode: SeparationMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_count_parity(mut self, even: Parity, odd: Parity) -> Self {
        self.count_parity = Some((even, odd));
        self
    }

    pub fn excluding_all_even(mut self) -> Self {
        self.all_even_excluded = true;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.min_part == 0 {
            return Err(Error::param("min_part must be at least 1"));
        }
        Ok(())
    }

    fn allows_part(&self, p: u32) -> bool {
        p >= self.min_part && !self.forbidden_parts.contains(&p)
    }

    /// Everything except the part-set restriction, which the generator applies.
    fn admits(&self, parts: &[u32]) -> bool {
        let evens = parts.iter().filter(|&&p| p % 2 == 0);
        let odds = parts.iter().filter(|&&p| p % 2 == 1);
        let (n_even, n_odd) = (evens.clone().count(), odds.clone().count());
        if self.all_even_excluded && n_odd == 0 {
            return false;
        }
        if let Some((pe, po)) = self.count_parity {
            if !pe.matches(n_even) || !po.matches(n_odd) {
                return false;
            }
        }
        match self.mode {
            SeparationMode::Ordinary => true,
            SeparationMode::EvenBelowOdd => match (evens.max(), odds.min()) {
                (Some(e), Some(o)) => e < o,
                _ => true,
            },
            SeparationMode::OddBelowEven => match (odds.max(), evens.min()) {
                (Some(o), Some(e)) => o < e,
                _ => true,
            },
        }
    }
}

/// "More parts congruent to `j` than to `k` modulo `m`".
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BiasSpec {
    j: u32,
    k: u32,
    m: u32,
}

impl BiasSpec {
    pub fn new(j: u32, k: u32, m: u32) -> Result<Self> {
        if m < 2 || j >= m || k >= m || j == k {
            return Err(Error::param(format!("bias needs 0 <= j, k < m, j != k, m >= 2 (got j={j}, k={k}, m={m})")));
        }
        Ok(BiasSpec { j, k, m })
    }

    /// odd parts versus even parts
    pub fn odd_over_even() -> Self {
        BiasSpec { j: 1, k: 0, m: 2 }
    }

    pub fn even_over_odd() -> Self {
        BiasSpec { j: 0, k: 1, m: 2 }
    }

    pub fn j(self) -> u32 {
        self.j
    }

    pub fn k(self) -> u32 {
        self.k
    }

    pub fn m(self) -> u32 {
        self.m
    }

    pub fn swapped(self) -> Self {
        BiasSpec { j: self.k, k: self.j, m: self.m }
    }

    fn delta(self, part: u32) -> isize {
        let r = part % self.m;
        if r == self.j {
            1
        } else if r == self.k {
            -1
        } else {
            0
        }
    }
}

/// Per-part-count-parity families with a strict parity majority.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ParityFamily {
    /// even counts of both, more even parts
    EMe,
    /// even counts of both, more odd parts
    OMe,
    /// odd counts of both, more even parts
    EMo,
    /// odd counts of both, more odd parts
    OMo,
}

impl ParityFamily {
    pub fn as_str(self) -> &'static str {
        match self {
            ParityFamily::EMe => "E_me",
            ParityFamily::OMe => "O_me",
            ParityFamily::EMo => "E_mo",
            ParityFamily::OMo => "O_mo",
        }
    }

    fn count_parity(self) -> Parity {
        match self {
            ParityFamily::EMe | ParityFamily::OMe => Parity::Even,
            ParityFamily::EMo | ParityFamily::OMo => Parity::Odd,
        }
    }

    fn more_even(self) -> bool {
        matches!(self, ParityFamily::EMe | ParityFamily::EMo)
    }
}

impl FromStr for ParityFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "E_me" | "eme" => Ok(ParityFamily::EMe),
            "O_me" | "ome" => Ok(ParityFamily::OMe),
            "E_mo" | "emo" => Ok(ParityFamily::EMo),
            "O_mo" | "omo" => Ok(ParityFamily::OMo),
            other => Err(Error::param(format!("unknown parity family `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OracleTier {
    Enum,
    Dp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleCaps {
    pub enum_cap: usize,
    pub dp_cap: usize,
}

impl Default for OracleCaps {
    fn default() -> Self {
        OracleCaps { enum_cap: DEFAULT_ENUM_CAP, dp_cap: DEFAULT_DP_CAP }
    }
}

impl OracleCaps {
    /// Defaults overridden by `PB_ENUM_CAP` / `PB_DP_CAP` when set.
    pub fn from_env() -> Result<Self> {
        let read = |var: &str, default: usize| -> Result<usize> {
            match std::env::var(var) {
                Ok(v) => v
                    .trim()
                    .parse()
                    .map_err(|_| Error::param(format!("{var} must be a nonnegative integer, got `{v}`"))),
                Err(_) => Ok(default),
            }
        };
        Ok(OracleCaps { enum_cap: read(ENUM_CAP_VAR, DEFAULT_ENUM_CAP)?, dp_cap: read(DP_CAP_VAR, DEFAULT_DP_CAP)? })
    }
}

/// Counts of partitions with more parts `≡ j`, more `≡ k`, and ties, indexed by `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiasTable {
    pub more_j: Vec<BigUint>,
    pub more_k: Vec<BigUint>,
    pub tied: Vec<BigUint>,
}

pub fn residue_counts(p: &Partition, m: u32) -> Vec<usize> {
    let mut counts = vec![0; m as usize];
    for &part in p.parts() {
        counts[(part % m) as usize] += 1;
    }
    counts
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Oracle {
    caps: OracleCaps,
}

impl Oracle {
    pub fn new(caps: OracleCaps) -> Self {
        Oracle { caps }
    }

    pub fn caps(&self) -> OracleCaps {
        self.caps
    }

    fn check_enum(&self, n: usize) -> Result<()> {
        if n > self.caps.enum_cap {
            return Err(Error::CapExceeded { tier: "enumeration", n, cap: self.caps.enum_cap });
        }
        Ok(())
    }

    fn check_dp(&self, n: usize) -> Result<()> {
        if n > self.caps.dp_cap {
            return Err(Error::CapExceeded { tier: "dp", n, cap: self.caps.dp_cap });
        }
        Ok(())
    }

    /// All admitted partitions of `n`, largest first part first.
    pub fn enumerate(&self, n: usize, c: &ConstraintSpec) -> Result<Vec<Partition>> {
        let mut out = Vec::new();
        self.for_each(n, c, |parts| out.push(Partition { parts: parts.to_vec() }))?;
        Ok(out)
    }

    fn for_each(&self, n: usize, c: &ConstraintSpec, mut visit: impl FnMut(&[u32])) -> Result<()> {
        self.check_enum(n)?;
        c.validate()?;
        let allowed: Vec<u32> = (1..=n as u32).rev().filter(|&p| c.allows_part(p)).collect();
        let mut stack = Vec::new();
        walk(n as u32, &allowed, &mut stack, &mut |parts| {
            if c.admits(parts) {
                visit(parts)
            }
        });
        Ok(())
    }

    pub fn count_bias_enum(&self, n: usize, c: &ConstraintSpec, b: BiasSpec) -> Result<BigUint> {
        let mut count = 0u64;
        self.for_each(n, c, |parts| {
            let d: isize = parts.iter().map(|&p| b.delta(p)).sum();
            if d > 0 {
                count += 1;
            }
        })?;
        Ok(BigUint::from(count))
    }

    pub fn bias_table_enum(&self, max_n: usize, c: &ConstraintSpec, b: BiasSpec) -> Result<BiasTable> {
        self.check_enum(max_n)?;
        let mut table = BiasTable::zeros(max_n);
        for n in 0..=max_n {
            let (mut j, mut k, mut t) = (0u64, 0u64, 0u64);
            self.for_each(n, c, |parts| {
                let d: isize = parts.iter().map(|&p| b.delta(p)).sum();
                match d.signum() {
                    1 => j += 1,
                    -1 => k += 1,
                    _ => t += 1,
                }
            })?;
            table.more_j[n] = j.into();
            table.more_k[n] = k.into();
            table.tied[n] = t.into();
        }
        Ok(table)
    }

    pub fn count_bias_dp(&self, n: usize, c: &ConstraintSpec, b: BiasSpec) -> Result<BigUint> {
        let mut table = self.bias_table_dp(n, c, b)?;
        Ok(table.more_j.swap_remove(n))
    }

    /// DP over (sum, #≡j − #≡k) for every `n <= max_n`.
    pub fn bias_table_dp(&self, max_n: usize, c: &ConstraintSpec, b: BiasSpec) -> Result<BiasTable> {
        self.check_dp(max_n)?;
        c.validate()?;
        if c.mode != SeparationMode::Ordinary || c.count_parity.is_some() || c.all_even_excluded {
            return Err(Error::UnsupportedMode("the bias DP handles only part-set restrictions".into()));
        }
        let parts = (1..=max_n as u32).filter(|&p| c.allows_part(p)).map(|p| PartEffect {
            size: p as usize,
            delta: b.delta(p),
            flip: 0,
        });
        let dist = difference_dp(max_n, 1, parts);
        let mut table = BiasTable::zeros(max_n);
        for n in 0..=max_n {
            let (j, k, t) = dist.split_by_sign(n, 0);
            table.more_j[n] = j;
            table.more_k[n] = k;
            table.tied[n] = t;
        }
        Ok(table)
    }

    /// Partitions of `n` with all parts `>= m` counted by `which`.
    pub fn count_parity_family(&self, n: usize, m: u32, which: ParityFamily, tier: OracleTier) -> Result<BigUint> {
        let mut v = self.parity_table(n, m, which, tier)?;
        Ok(v.swap_remove(n))
    }

    pub fn parity_table(&self, max_n: usize, m: u32, which: ParityFamily, tier: OracleTier) -> Result<Vec<BigUint>> {
        if m == 0 {
            return Err(Error::param("minimum part must be at least 1"));
        }
        match tier {
            OracleTier::Enum => {
                let parity = which.count_parity();
                let c = ConstraintSpec::default().with_min_part(m).with_count_parity(parity, parity);
                let table = self.bias_table_enum(max_n, &c, BiasSpec::even_over_odd())?;
                Ok(if which.more_even() { table.more_j } else { table.more_k })
            }
            OracleTier::Dp => {
                self.check_dp(max_n)?;
                // layer bit 0: #even parts odd, bit 1: #odd parts odd
                let parts = (m as usize..=max_n).map(|p| {
                    if p % 2 == 0 {
                        PartEffect { size: p, delta: 1, flip: 0b01 }
                    } else {
                        PartEffect { size: p, delta: -1, flip: 0b10 }
                    }
                });
                let dist = difference_dp(max_n, 4, parts);
                let layer = match which.count_parity() {
                    Parity::Even => 0b00,
                    Parity::Odd => 0b11,
                };
                Ok((0..=max_n)
                    .map(|n| {
                        let (more_even, more_odd, _) = dist.split_by_sign(n, layer);
                        if which.more_even() {
                            more_even
                        } else {
                            more_odd
                        }
                    })
                    .collect())
            }
        }
    }

    /// Partitions with parts separated by parity. `OddBelowEven` always
    /// excludes partitions without odd parts.
    pub fn count_separated(
        &self,
        n: usize,
        mode: SeparationMode,
        non_unitary: bool,
        tier: OracleTier,
    ) -> Result<BigUint> {
        let mut v = self.separated_table(n, mode, non_unitary, tier)?;
        Ok(v.swap_remove(n))
    }

    pub fn separated_table(
        &self,
        max_n: usize,
        mode: SeparationMode,
        non_unitary: bool,
        tier: OracleTier,
    ) -> Result<Vec<BigUint>> {
        if mode == SeparationMode::Ordinary {
            return Err(Error::UnsupportedMode("separated counts need a separation mode".into()));
        }
        let min_part = if non_unitary { 2 } else { 1 };
        match tier {
            OracleTier::Enum => {
                let mut c = ConstraintSpec::default().with_min_part(min_part).with_mode(mode);
                if mode == SeparationMode::OddBelowEven {
                    c = c.excluding_all_even();
                }
                self.check_enum(max_n)?;
                (0..=max_n)
                    .map(|n| {
                        let mut count = 0u64;
                        self.for_each(n, &c, |_| count += 1)?;
                        Ok(BigUint::from(count))
                    })
                    .collect()
            }
            OracleTier::Dp => {
                self.check_dp(max_n)?;
                Ok(separated_dp(max_n, mode, min_part as usize))
            }
        }
    }
}

impl BiasTable {
    fn zeros(max_n: usize) -> Self {
        BiasTable {
            more_j: vec![BigUint::zero(); max_n + 1],
            more_k: vec![BigUint::zero(); max_n + 1],
            tied: vec![BigUint::zero(); max_n + 1],
        }
    }
}

fn walk(remaining: u32, allowed: &[u32], stack: &mut Vec<u32>, visit: &mut dyn FnMut(&[u32])) {
    if remaining == 0 {
        visit(stack);
        return;
    }
    let cap = stack.last().copied().unwrap_or(u32::MAX);
    for (i, &p) in allowed.iter().enumerate() {
        if p > remaining || p > cap {
            continue;
        }
        stack.push(p);
        walk(remaining - p, &allowed[i..], stack, visit);
        stack.pop();
    }
}

struct PartEffect {
    size: usize,
    delta: isize,
    flip: usize,
}

/// `cells[s][layer * width + offset + d]`: number of multisets of the given
/// parts with sum `s`, count difference `d` and parity layer `layer`.
struct Distribution {
    max_n: usize,
    cells: Vec<Vec<BigUint>>,
}

impl Distribution {
    fn width(&self) -> usize {
        2 * self.max_n + 1
    }

    /// (d > 0, d < 0, d = 0) totals at sum `n` in one layer.
    fn split_by_sign(&self, n: usize, layer: usize) -> (BigUint, BigUint, BigUint) {
        let w = self.width();
        let row = &self.cells[n][layer * w..(layer + 1) * w];
        let off = self.max_n;
        let pos = row[off + 1..].iter().sum();
        let neg = row[..off].iter().sum();
        (pos, neg, row[off].clone())
    }
}

fn difference_dp(max_n: usize, layers: usize, parts: impl Iterator<Item = PartEffect>) -> Distribution {
    let w = 2 * max_n + 1;
    let off = max_n as isize;
    let mut cells = vec![vec![BigUint::zero(); layers * w]; max_n + 1];
    cells[0][off as usize] = BigUint::one();
    for part in parts {
        let v = part.size;
        for s in v..=max_n {
            let (lo, hi) = cells.split_at_mut(s);
            let src = &lo[s - v];
            let dst = &mut hi[0];
            // a multiset with sum s - v has at most s - v parts
            let reach = (s - v) as isize;
            for layer in 0..layers {
                let to_layer = layer ^ part.flip;
                for d in -reach..=reach {
                    let from = &src[layer * w + (off + d) as usize];
                    if from.is_zero() {
                        continue;
                    }
                    dst[to_layer * w + (off + d + part.delta) as usize] += from;
                }
            }
        }
    }
    Distribution { max_n, cells }
}

/// Parts are added in increasing size; the state records whether an odd or an
/// even part has been used, and the separation rule forbids the larger class
/// from being followed by the smaller one.
fn separated_dp(max_n: usize, mode: SeparationMode, min_part: usize) -> Vec<BigUint> {
    const ODD: usize = 0b01;
    const EVEN: usize = 0b10;
    let mut t = vec![vec![BigUint::zero(); max_n + 1]; 4];
    t[0][0] = BigUint::one();
    for v in min_part..=max_n {
        let bit = if v % 2 == 1 { ODD } else { EVEN };
        let blocked_by = match mode {
            SeparationMode::EvenBelowOdd if bit == EVEN => ODD,
            SeparationMode::OddBelowEven if bit == ODD => EVEN,
            _ => 0,
        };
        for s in v..=max_n {
            for state in 0..4 {
                if state & blocked_by != 0 {
                    continue;
                }
                let to = state | bit;
                let add = t[state][s - v].clone();
                if !add.is_zero() {
                    t[to][s] += add;
                }
            }
        }
    }
    (0..=max_n)
        .map(|n| match mode {
            SeparationMode::OddBelowEven => &t[ODD][n] + &t[ODD | EVEN][n],
            _ => t.iter().map(|row| &row[n]).sum(),
        })
        .collect()
}
