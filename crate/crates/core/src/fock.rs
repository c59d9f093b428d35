//! Graded Fock spaces of the rank-one Heisenberg algebra.
//!
//! A [`FockVector`] is a finite combination of monomials
//! `β(-n_1) ⋯ β(-n_k) v` where `v` is the highest-weight vector of a sector:
//! either a lattice exponential `e^{mβ}` or a continuous highest weight
//! `v_λ` labelled by `t = ⟨λ, α⟩`. Only the `β(0)`-eigenvalue of the sector
//! enters the mode formulas, so both kinds share one code path.
//!
//! Normalization: `⟨β, β⟩ = 2/p`, `α = pβ`, and the conformal vector is
//! `ω = (p/4) β(-1)² 1 + ((p-1)/2) β(-2) 1`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactlin::{int, parse_rational, rat, Rational};

/// The parameter `p >= 2` and derived constants.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModelParams {
    p: u32,
    central_charge: Rational,
}

impl ModelParams {
    pub fn new(p: i64) -> Result<Self> {
        if p < 2 {
            return Err(Error::InvalidP(p));
        }
        let pi = p;
        Ok(Self {
            p: p as u32,
            central_charge: int(1) - rat(6 * (pi - 1) * (pi - 1), pi),
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn p_i64(&self) -> i64 {
        self.p as i64
    }

    /// `c_{p,1} = 1 - 6 (p-1)² / p`.
    pub fn central_charge(&self) -> &Rational {
        &self.central_charge
    }

    /// `⟨β, β⟩ = 2/p`.
    pub fn beta_norm(&self) -> Rational {
        rat(2, self.p_i64())
    }

    /// The sector `M(1) ⊗ e^{mβ}`.
    pub fn lattice(&self, m: i64) -> Sector {
        Sector::new(self.p, SectorKind::Lattice(m))
    }

    /// The vacuum sector `M(1)`.
    pub fn vacuum_sector(&self) -> Sector {
        self.lattice(0)
    }

    /// The sector `M(1, λ)` with `⟨λ, α⟩ = t`.
    pub fn continuous(&self, t: Rational) -> Sector {
        Sector::new(self.p, SectorKind::Continuous(t))
    }

    /// Default truncation level `2(2p-1) + 2`.
    pub fn default_max_level(&self) -> u32 {
        2 * (2 * self.p - 1) + 2
    }

    /// The vacuum vector `1`.
    pub fn vacuum(&self) -> FockVector {
        FockVector::highest(self.vacuum_sector())
    }

    /// `e^{mβ}`.
    pub fn exponential(&self, m: i64) -> FockVector {
        FockVector::highest(self.lattice(m))
    }

    /// The conformal vector `ω`.
    pub fn omega(&self) -> FockVector {
        let p = self.p_i64();
        let mut v = FockVector::zero(self.vacuum_sector());
        v.add_term(Partition::new(vec![1, 1]), rat(p, 4));
        v.add_term(Partition::new(vec![2]), rat(p - 1, 2));
        v
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SectorKind {
    /// `e^{mβ}`, charge measured in units of `β`.
    Lattice(i64),
    /// `v_λ` with `t = ⟨λ, α⟩`.
    Continuous(Rational),
}

/// A highest-weight sector with its `β(0)` eigenvalue and conformal shift.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sector {
    p: u32,
    kind: SectorKind,
    b0: Rational,
    delta: Rational,
}

impl Sector {
    fn new(p: u32, kind: SectorKind) -> Self {
        let pi = p as i64;
        let b0 = match &kind {
            SectorKind::Lattice(m) => rat(2 * m, pi),
            SectorKind::Continuous(t) => t / int(pi),
        };
        // (p/4) b0² - ((p-1)/2) b0
        let delta = rat(pi, 4) * &b0 * &b0 - rat(pi - 1, 2) * &b0;
        Self { p, kind, b0, delta }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn kind(&self) -> &SectorKind {
        &self.kind
    }

    /// Eigenvalue of `β(0)`.
    pub fn b0(&self) -> &Rational {
        &self.b0
    }

    /// Conformal weight of the highest-weight vector.
    pub fn delta(&self) -> &Rational {
        &self.delta
    }

    /// Lattice charge in units of `β`, if this is a lattice sector.
    pub fn charge(&self) -> Option<i64> {
        match self.kind {
            SectorKind::Lattice(m) => Some(m),
            SectorKind::Continuous(_) => None,
        }
    }

    /// `⟨cβ, λ⟩` for this sector's weight `λ`.
    pub fn pairing_with_beta_multiple(&self, c: i64) -> Rational {
        &self.b0 * int(c)
    }

    /// The sector reached by multiplying with `e^{cβ}`.
    pub fn shifted(&self, c: i64) -> Sector {
        let kind = match &self.kind {
            SectorKind::Lattice(m) => SectorKind::Lattice(m + c),
            SectorKind::Continuous(t) => SectorKind::Continuous(t + int(2 * c)),
        };
        Sector::new(self.p, kind)
    }
}

impl fmt::Display for Sector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            SectorKind::Lattice(m) => write!(f, "{m}"),
            SectorKind::Continuous(t) => write!(f, "t={t}"),
        }
    }
}

/// Parts of a Heisenberg monomial, weakly decreasing.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Sorts the parts; zero parts are rejected.
    pub fn new(mut parts: Vec<u32>) -> Self {
        assert!(parts.iter().all(|&x| x > 0), "parts must be positive");
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self(parts)
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn level(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn largest(&self) -> u32 {
        self.0.first().copied().unwrap_or(0)
    }

    pub fn multiplicity(&self, part: u32) -> u32 {
        self.0.iter().filter(|&&x| x == part).count() as u32
    }

    /// `(part, multiplicity)` pairs, largest part first.
    pub fn multiplicities(&self) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = Vec::new();
        for &x in &self.0 {
            match out.last_mut() {
                Some((q, m)) if *q == x => *m += 1,
                _ => out.push((x, 1)),
            }
        }
        out
    }

    pub fn with_part(&self, part: u32) -> Self {
        let pos = self.0.partition_point(|&x| x > part);
        let mut v = self.0.clone();
        v.insert(pos, part);
        Self(v)
    }

    /// Removes one copy of `part`; `None` if absent.
    pub fn without_part(&self, part: u32) -> Option<Self> {
        let pos = self.0.iter().position(|&x| x == part)?;
        let mut v = self.0.clone();
        v.remove(pos);
        Some(Self(v))
    }

    /// Union of parts (product of monomials).
    pub fn merge(&self, other: &Partition) -> Self {
        let (a, b) = (&self.0, &other.0);
        let mut v = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            if a[i] >= b[j] {
                v.push(a[i]);
                i += 1;
            } else {
                v.push(b[j]);
                j += 1;
            }
        }
        v.extend_from_slice(&a[i..]);
        v.extend_from_slice(&b[j..]);
        Self(v)
    }

    /// Monomial from a multiplicity table `(part, multiplicity)`.
    pub fn from_multiplicities(mults: &[(u32, u32)]) -> Self {
        let mut v = Vec::new();
        for &(part, m) in mults {
            v.extend(std::iter::repeat_n(part, m as usize));
        }
        Self::new(v)
    }
}

impl fmt::Display for Partition {
    /// `b(-3)^1 b(-1)^2`, or `1` for the empty monomial.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .multiplicities()
            .into_iter()
            .map(|(n, e)| format!("b(-{n})^{e}"))
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// All partitions of `level`, in reverse-lexicographic order:
/// `(3), (2,1), (1,1,1)`.
pub fn basis(level: u32) -> Vec<Partition> {
    fn go(remaining: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for part in (1..=remaining.min(max)).rev() {
            cur.push(part);
            go(remaining - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(level, level, &mut Vec::new(), &mut out);
    out
}

/// A finite combination of monomials over one sector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FockVector {
    sector: Sector,
    terms: BTreeMap<Partition, Rational>,
}

impl FockVector {
    pub fn zero(sector: Sector) -> Self {
        Self {
            sector,
            terms: BTreeMap::new(),
        }
    }

    /// The highest-weight vector of a sector.
    pub fn highest(sector: Sector) -> Self {
        Self::monomial(sector, Partition::empty(), Rational::one())
    }

    pub fn monomial(sector: Sector, mono: Partition, coeff: Rational) -> Self {
        let mut v = Self::zero(sector);
        v.add_term(mono, coeff);
        v
    }

    pub(crate) fn from_terms(sector: Sector, terms: BTreeMap<Partition, Rational>) -> Self {
        debug_assert!(terms.values().all(|c| !c.is_zero()));
        Self { sector, terms }
    }

    pub fn sector(&self) -> &Sector {
        &self.sector
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Partition, &Rational)> {
        self.terms.iter()
    }

    /// Number of nonzero terms; see `is_zero`.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, mono: &Partition) -> Rational {
        self.terms.get(mono).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, mono: Partition, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self += c * other`. Panics on a sector mismatch.
    pub fn add_scaled(&mut self, other: &FockVector, c: &Rational) {
        assert_eq!(self.sector, other.sector, "sector mismatch");
        if c.is_zero() {
            return;
        }
        for (m, v) in &other.terms {
            self.add_term(m.clone(), v * c);
        }
    }

    pub fn scaled(&self, c: &Rational) -> FockVector {
        let mut out = FockVector::zero(self.sector.clone());
        out.add_scaled(self, c);
        out
    }

    pub fn plus(&self, other: &FockVector) -> FockVector {
        let mut out = self.clone();
        out.add_scaled(other, &Rational::one());
        out
    }

    pub fn minus(&self, other: &FockVector) -> FockVector {
        let mut out = self.clone();
        out.add_scaled(other, &-Rational::one());
        out
    }

    /// Distinct levels present, ascending.
    pub fn levels(&self) -> Vec<u32> {
        let mut ls: Vec<u32> = self.terms.keys().map(Partition::level).collect();
        ls.sort_unstable();
        ls.dedup();
        ls
    }

    /// The level if all monomials share one; `None` for zero or mixed.
    pub fn level(&self) -> Option<u32> {
        match self.levels().as_slice() {
            [l] => Some(*l),
            _ => None,
        }
    }

    /// The component at a given level.
    pub fn level_component(&self, level: u32) -> FockVector {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.level() == level)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        FockVector::from_terms(self.sector.clone(), terms)
    }

    /// Conformal weight of a homogeneous vector.
    pub fn weight(&self) -> Option<Rational> {
        self.level().map(|l| self.sector.delta() + int(l as i64))
    }

    /// Coordinates in `basis(level)`; monomials at other levels are ignored.
    pub fn coordinates(&self, level: u32) -> Vec<Rational> {
        basis(level).iter().map(|m| self.coeff(m)).collect()
    }

    /// Combination of `basis(level)` with the given coefficients.
    pub fn from_coordinates(sector: Sector, level: u32, coords: &[Rational]) -> Self {
        let mut v = FockVector::zero(sector);
        for (m, c) in basis(level).into_iter().zip(coords) {
            v.add_term(m, c.clone());
        }
        v
    }
}

impl fmt::Display for FockVector {
    /// `c1 mono1@sector ; c2 mono2@sector`, or `0@sector`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0@{}", self.sector);
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " ; ")?;
            }
            first = false;
            write!(f, "{c} {m}@{}", self.sector)?;
        }
        Ok(())
    }
}

impl std::str::FromStr for Partition {
    type Err = Error;

    /// Inverse of the `Display` form.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "1" {
            return Ok(Self::empty());
        }
        let bad = || Error::Parse(format!("monomial `{s}`"));
        let mut mults = Vec::new();
        for factor in s.split_whitespace() {
            let rest = factor.strip_prefix("b(-").ok_or_else(bad)?;
            let (n, e) = rest.split_once(")^").ok_or_else(bad)?;
            let n: u32 = n.parse().map_err(|_| bad())?;
            let e: u32 = e.parse().map_err(|_| bad())?;
            if n == 0 || e == 0 {
                return Err(bad());
            }
            mults.push((n, e));
        }
        let out = Self::from_multiplicities(&mults);
        if out.multiplicities() != mults {
            return Err(bad());
        }
        Ok(out)
    }
}

impl ModelParams {
    /// Inverse of `Sector`'s `Display` form.
    pub fn parse_sector(&self, s: &str) -> Result<Sector> {
        let s = s.trim();
        match s.strip_prefix("t=") {
            Some(t) => parse_rational(t)
                .map(|t| self.continuous(t))
                .ok_or_else(|| Error::Parse(format!("sector `{s}`"))),
            None => s
                .parse::<i64>()
                .map(|m| self.lattice(m))
                .map_err(|_| Error::Parse(format!("sector `{s}`"))),
        }
    }
}

impl FockVector {
    /// Inverse of the `Display` form; terms must carry a common sector.
    pub fn parse(params: &ModelParams, s: &str) -> Result<Self> {
        let bad = |what: &str| Error::Parse(format!("{what} in vector `{s}`"));
        let mut sector = None;
        let mut terms = Vec::new();
        for term in s.split(" ; ") {
            let (body, sec) = term.rsplit_once('@').ok_or_else(|| bad("missing sector"))?;
            let sec = params.parse_sector(sec)?;
            if sector.get_or_insert_with(|| sec.clone()) != &sec {
                return Err(bad("mixed sectors"));
            }
            if body.trim() == "0" && !s.contains(" ; ") {
                break;
            }
            let (c, mono) = body.trim().split_once(' ').ok_or_else(|| bad("term"))?;
            let c = parse_rational(c).ok_or_else(|| bad("coefficient"))?;
            if c.is_zero() {
                return Err(bad("zero coefficient"));
            }
            terms.push((mono.parse::<Partition>()?, c));
        }
        let mut v = FockVector::zero(sector.ok_or_else(|| bad("empty"))?);
        for (m, c) in terms {
            if v.terms.contains_key(&m) {
                return Err(bad("repeated monomial"));
            }
            v.add_term(m, c);
        }
        Ok(v)
    }
}

/// `β(n)` applied to a single monomial.
fn heis_monomial(params: &ModelParams, sector: &Sector, n: i64, mono: &Partition) -> Option<(Partition, Rational)> {
    use std::cmp::Ordering::*;
    match n.cmp(&0) {
        Less => Some((mono.with_part((-n) as u32), Rational::one())),
        Equal => {
            if sector.b0().is_zero() {
                None
            } else {
                Some((mono.clone(), sector.b0().clone()))
            }
        }
        Greater => {
            let part = n as u32;
            let mult = mono.multiplicity(part);
            if mult == 0 {
                return None;
            }
            let c = int(mult as i64) * int(n) * params.beta_norm();
            Some((mono.without_part(part).expect("present"), c))
        }
    }
}

/// `β(n) v`.
pub fn heis(params: &ModelParams, n: i64, v: &FockVector) -> FockVector {
    let mut out = FockVector::zero(v.sector.clone());
    for (m, c) in &v.terms {
        if let Some((m2, c2)) = heis_monomial(params, &v.sector, n, m) {
            out.add_term(m2, c * c2);
        }
    }
    out
}

/// `L(n) v` with `L(n) = (p/4) Σ_j :β(j)β(n-j): - ((p-1)/2)(n+1) β(n)`,
/// annihilation modes (including `β(0)`) ordered to the right.
pub fn virasoro(params: &ModelParams, n: i64, v: &FockVector) -> FockVector {
    let p = params.p_i64();
    let quad = rat(p, 4);
    let lin = rat(p - 1, 2) * int(n + 1);
    let mut out = FockVector::zero(v.sector.clone());
    for (mono, c) in &v.terms {
        let level = mono.level() as i64;
        // Beyond this range one factor annihilates past the available level.
        let bound = level + n.abs() + 1;
        for j in -bound..=bound {
            let k = n - j;
            // Apply the annihilating factor first.
            let (first, second) = if j >= 0 { (j, k) } else { (k, j) };
            if first > level || (second >= 0 && second > level) {
                continue;
            }
            let Some((m1, c1)) = heis_monomial(params, &v.sector, first, mono) else {
                continue;
            };
            let Some((m2, c2)) = heis_monomial(params, &v.sector, second, &m1) else {
                continue;
            };
            out.add_term(m2, c * c1 * c2 * &quad);
        }
        if !lin.is_zero() {
            if let Some((m1, c1)) = heis_monomial(params, &v.sector, n, mono) {
                out.add_term(m1, -(c * c1 * &lin));
            }
        }
    }
    out
}

/// Checks `[L(m), L(n)] v = (m-n) L(m+n) v + δ_{m+n,0} (m³-m)/12 c v`.
pub fn virasoro_bracket_check(params: &ModelParams, m: i64, n: i64, v: &FockVector) -> bool {
    let lhs = virasoro(params, m, &virasoro(params, n, v))
        .minus(&virasoro(params, n, &virasoro(params, m, v)));
    let mut rhs = virasoro(params, m + n, v).scaled(&int(m - n));
    if m + n == 0 {
        let central = rat(m * m * m - m, 12) * params.central_charge();
        rhs.add_scaled(v, &central);
    }
    lhs == rhs
}
