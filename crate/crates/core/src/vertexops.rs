//! Vertex operators of the lattice extension: exponentials `e^{γ}`,
//! Schur-polynomial vectors, the screening operators, and general products
//! `a_n b`.
//!
//! For `a = β(-n_1)⋯β(-n_k) e^{γ}` the field is the normally ordered product
//!
//! ```text
//! Y(a, z) = :∂^{(n_1-1)}β(z) ⋯ ∂^{(n_k-1)}β(z) E^-(γ, z) E^+(γ, z) e_γ z^{γ(0)}:
//! E^-(γ, z) = exp( Σ_{n≥1} γ(-n) z^n / n)
//! E^+(γ, z) = exp(-Σ_{n≥1} γ(n) z^{-n} / n)
//! ```
//!
//! with creation modes on the left and annihilation modes (including `β(0)`,
//! which sees the input sector) on the right. The cocycle is trivial.
//! Because every annihilation factor lowers the level of a finite monomial,
//! each Laurent coefficient is a finite sum and is computed exactly.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactlin::{binomial_int, int, rational, Rational};
use crate::fock::{basis, FockVector, ModelParams, Partition, Sector};

/// `γ = c β` in the rank-one lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeVector {
    pub coeff_beta: i64,
}

impl LatticeVector {
    pub fn new(coeff_beta: i64) -> Self {
        Self { coeff_beta }
    }

    pub fn beta() -> Self {
        Self::new(1)
    }

    /// `α = p β`.
    pub fn alpha(params: &ModelParams) -> Self {
        Self::new(params.p_i64())
    }

    /// `⟨γ, δ⟩ = c c' (2/p)`.
    pub fn pairing(&self, other: &LatticeVector, params: &ModelParams) -> Rational {
        int(self.coeff_beta * other.coeff_beta) * params.beta_norm()
    }
}

type Terms = BTreeMap<Partition, Rational>;

fn schur_cache() -> &'static Mutex<HashMap<(i64, u32), Arc<Terms>>> {
    type SchurCache = Mutex<HashMap<(i64, u32), Arc<Terms>>>;
    static CACHE: OnceLock<SchurCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficient of `y^r` in `exp(Σ_{n≥1} c β(-n) y^n / n)` as a polynomial in
/// creation modes.
fn schur_terms(r: u32, scale: i64) -> Arc<Terms> {
    if let Some(hit) = schur_cache().lock().unwrap().get(&(scale, r)) {
        return hit.clone();
    }
    let mut terms = Terms::new();
    if scale == 0 {
        if r == 0 {
            terms.insert(Partition::empty(), Rational::one());
        }
    } else {
        let c = int(scale);
        for mono in basis(r) {
            // Π_n (c/n)^{m_n} / m_n!
            let coeff = mono.multiplicities().iter().fold(Rational::one(), |acc, &(n, m)| {
                acc * rational::pow(&(&c / int(n as i64)), m)
                    / Rational::from_integer(rational::factorial(m))
            });
            terms.insert(mono, coeff);
        }
    }
    let terms = Arc::new(terms);
    schur_cache().lock().unwrap().insert((scale, r), terms.clone());
    terms
}

/// `S_r(h(-1), h(-2), …) 1` with `h = scale · β`; `scale = p` gives `S_r(α)`.
pub fn schur_vector(params: &ModelParams, r: u32, scale: i64) -> FockVector {
    let terms = (*schur_terms(r, scale)).clone();
    let mut v = FockVector::zero(params.vacuum_sector());
    for (m, c) in terms {
        v.add_term(m, c);
    }
    v
}

/// Laurent coefficients of `Y(a, z) b` after removing the overall factor
/// `z^{⟨γ, δ⟩}`: entry `k` is the coefficient of `z^{⟨γ,δ⟩ + k}`, for
/// `k_lo <= k <= k_hi`. `a` must be a lattice-sector vector.
fn field_expansion(
    params: &ModelParams,
    a: &FockVector,
    b: &FockVector,
    k_lo: i64,
    k_hi: i64,
) -> BTreeMap<i64, Terms> {
    let c = a
        .sector()
        .charge()
        .expect("field vector must lie in a lattice sector");
    let b0 = b.sector().b0().clone();
    let mut out: BTreeMap<i64, Terms> = BTreeMap::new();
    if k_lo > k_hi || b.is_zero() {
        return out;
    }
    // E^+(γ) on β(-n)^m picks j copies with weight C(m, j) (-⟨γ,β⟩)^j.
    let eplus_weight = -(int(c) * params.beta_norm());

    for (u, ca) in a.terms() {
        let mults = u.multiplicities();
        // Choose, for every distinct part, how many of its copies create.
        for choice in bounded_tuples(&mults) {
            let weight = mults
                .iter()
                .zip(&choice)
                .fold(Rational::one(), |acc, (&(_, m), &s)| acc * binomial_int(m as i64, s));
            let creating: Vec<(u32, u32)> = mults
                .iter()
                .zip(&choice)
                .filter(|(_, &s)| s > 0)
                .map(|(&(n, _), &s)| (n, s))
                .collect();
            let annihilating: Vec<u32> = mults
                .iter()
                .zip(&choice)
                .flat_map(|(&(n, m), &s)| std::iter::repeat_n(n, (m - s) as usize))
                .collect();

            // Annihilation side applied to b: (exponent, monomial) -> coeff.
            let mut ann: BTreeMap<(i64, Partition), Rational> = BTreeMap::new();
            for (mono, cb) in b.terms() {
                ann.insert((0, mono.clone()), cb * ca * &weight);
            }
            for &n in &annihilating {
                let mut next: BTreeMap<(i64, Partition), Rational> = BTreeMap::new();
                for ((e, mono), coef) in ann {
                    // β(0) z^{-n} with coefficient C(-1, n-1).
                    if !b0.is_zero() {
                        let cc = binomial_int(-1, n - 1) * &b0 * &coef;
                        accumulate(&mut next, (e - n as i64, mono.clone()), cc);
                    }
                    for (part, mult) in mono.multiplicities() {
                        let cc = binomial_int(-(part as i64) - 1, n - 1)
                            * int(mult as i64 * part as i64)
                            * params.beta_norm()
                            * &coef;
                        let reduced = mono.without_part(part).expect("present");
                        accumulate(&mut next, (e - part as i64 - n as i64, reduced), cc);
                    }
                }
                ann = next;
            }
            if c != 0 {
                let mut next: BTreeMap<(i64, Partition), Rational> = BTreeMap::new();
                for ((e, mono), coef) in ann {
                    apply_eplus(&mono, &eplus_weight, e, &coef, &mut next);
                }
                ann = next;
            }

            // Creation side, up to the highest order any term needs.
            let Some(max_order) = ann.keys().map(|(e, _)| k_hi - e).max().filter(|m| *m >= 0) else {
                continue;
            };
            let series = creation_series(c, &creating, max_order as u32);
            for ((e, mono), coef) in &ann {
                let lo = (k_lo - e).max(0);
                let hi = k_hi - e;
                for order in lo..=hi {
                    let slot = &series[order as usize];
                    if slot.is_empty() {
                        continue;
                    }
                    let target = out.entry(e + order).or_default();
                    for (cm, cc) in slot {
                        accumulate(target, cm.merge(mono), cc * coef);
                    }
                }
            }
        }
    }
    out.retain(|_, t| !t.is_empty());
    out
}

fn accumulate<K: Ord>(map: &mut BTreeMap<K, Rational>, key: K, c: Rational) {
    if c.is_zero() {
        return;
    }
    match map.entry(key) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

/// Expands `E^+` on one monomial: for every sub-multiset removed, weight
/// `Π C(m_n, j_n) w^{j_n}` and exponent shift `-Σ n j_n`.
fn apply_eplus(
    mono: &Partition,
    w: &Rational,
    e: i64,
    coef: &Rational,
    out: &mut BTreeMap<(i64, Partition), Rational>,
) {
    let mults = mono.multiplicities();
    for take in bounded_tuples(&mults) {
        let mut shift = 0i64;
        let mut c = coef.clone();
        let mut kept = Vec::with_capacity(mults.len());
        for (&(n, m), &j) in mults.iter().zip(&take) {
            shift += (n * j) as i64;
            if j > 0 {
                c *= binomial_int(m as i64, j) * rational::pow(w, j);
            }
            kept.push((n, m - j));
        }
        accumulate(out, (e - shift, Partition::from_multiplicities(&kept)), c);
    }
}

/// All tuples `(s_1, …)` with `0 <= s_i <= m_i` for multiplicities `m_i`.
fn bounded_tuples(mults: &[(u32, u32)]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::with_capacity(mults.len())];
    for &(_, m) in mults {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..=m).map(move |s| {
                    let mut t = t.clone();
                    t.push(s);
                    t
                })
            })
            .collect();
    }
    out
}

/// Coefficients `0..=max_order` of `Π_j ∂^{(n_j-1)}β(z)_- · E^-(cβ, z)`.
fn creation_series(c: i64, creating: &[(u32, u32)], max_order: u32) -> Vec<Terms> {
    let mut series: Vec<Terms> = (0..=max_order).map(|r| (*schur_terms(r, c)).clone()).collect();
    for &(n, s) in creating {
        for _ in 0..s {
            // ∂^{(n-1)}β(z)_- = Σ_{m≥n} C(m-1, n-1) β(-m) z^{m-n}
            let mut next: Vec<Terms> = vec![Terms::new(); series.len()];
            for (order, slot) in next.iter_mut().enumerate() {
                for shift in 0..=order {
                    let m = n + shift as u32;
                    let coeff = binomial_int(m as i64 - 1, n - 1);
                    for (mono, cv) in &series[order - shift] {
                        accumulate(slot, mono.with_part(m), cv * &coeff);
                    }
                }
            }
            series = next;
        }
    }
    series
}

fn integral_pairing(pairing: Rational, sector: &Sector) -> Result<i64> {
    rational::to_i64(&pairing).ok_or_else(|| Error::NonIntegralPairing {
        pairing: pairing.to_string(),
        sector: sector.to_string(),
    })
}

/// Coefficient of `z^{⟨γ,δ⟩ + k}` in `Y(e^{γ}, z) v`, i.e. the mode
/// `e^{γ}_s` with `s = -⟨γ,δ⟩ - k - 1`.
pub fn exp_mode_apply(params: &ModelParams, gamma: LatticeVector, k: i64, v: &FockVector) -> FockVector {
    let a = params.exponential(gamma.coeff_beta);
    let target = v.sector().shifted(gamma.coeff_beta);
    let mut series = field_expansion(params, &a, v, k, k);
    terms_to_vector(target, series.remove(&k))
}

fn terms_to_vector(sector: Sector, terms: Option<Terms>) -> FockVector {
    let mut out = FockVector::zero(sector);
    for (m, c) in terms.unwrap_or_default() {
        out.add_term(m, c);
    }
    out
}

/// `Q = e^{α}_0`.
pub fn screening_q(params: &ModelParams, v: &FockVector) -> Result<FockVector> {
    let alpha = LatticeVector::alpha(params);
    let pairing = v.sector().pairing_with_beta_multiple(alpha.coeff_beta);
    let shift = integral_pairing(pairing, v.sector())?;
    Ok(exp_mode_apply(params, alpha, -1 - shift, v))
}

/// `Q̃ = e^{-β}_0`; defined where `⟨-β, δ⟩` is an integer.
pub fn screening_qtilde(params: &ModelParams, v: &FockVector) -> Result<FockVector> {
    let gamma = LatticeVector::new(-1);
    let pairing = v.sector().pairing_with_beta_multiple(-1);
    let shift = integral_pairing(pairing, v.sector())?;
    Ok(exp_mode_apply(params, gamma, -1 - shift, v))
}

/// `Q^j v`.
pub fn screening_q_power(params: &ModelParams, j: u32, v: &FockVector) -> Result<FockVector> {
    let mut cur = v.clone();
    for _ in 0..j {
        if cur.is_zero() {
            let sector = cur.sector().shifted(params.p_i64());
            return Ok(FockVector::zero(sector));
        }
        cur = screening_q(params, &cur)?;
    }
    Ok(cur)
}

/// The modes `a_n b` for `n_lo <= n <= n_hi`, keyed by `n`. Requires
/// `⟨γ, δ⟩` integral, so that mode indices are integers.
pub fn products(
    params: &ModelParams,
    a: &FockVector,
    b: &FockVector,
    n_lo: i64,
    n_hi: i64,
) -> Result<BTreeMap<i64, FockVector>> {
    let c = a
        .sector()
        .charge()
        .ok_or(Error::NotHomogeneous("lattice charge"))?;
    let shift = integral_pairing(b.sector().pairing_with_beta_multiple(c), b.sector())?;
    let target = b.sector().shifted(c);
    // a_n is the coefficient of z^{-n-1} = z^{shift + k}.
    let k_of = |n: i64| -n - 1 - shift;
    let series = field_expansion(params, a, b, k_of(n_hi), k_of(n_lo));
    let mut out = BTreeMap::new();
    for n in n_lo..=n_hi {
        let terms = series.get(&k_of(n)).cloned();
        out.insert(n, terms_to_vector(target.clone(), terms));
    }
    Ok(out)
}

/// `a_n b`.
pub fn product(params: &ModelParams, a: &FockVector, n: i64, b: &FockVector) -> Result<FockVector> {
    Ok(products(params, a, b, n, n)?.remove(&n).expect("requested mode"))
}

/// Largest `n` with possibly nonzero `a_n b`, from weight bookkeeping:
/// `wt(a_n b) = wt a + wt b - n - 1` must reach the target sector's
/// lowest weight.
pub fn max_nonzero_mode(a: &FockVector, b: &FockVector) -> Result<i64> {
    let c = a
        .sector()
        .charge()
        .ok_or(Error::NotHomogeneous("lattice charge"))?;
    let top_a = a.levels().last().copied().unwrap_or(0) as i64;
    let top_b = b.levels().last().copied().unwrap_or(0) as i64;
    let target = b.sector().shifted(c);
    let span = a.sector().delta() + b.sector().delta() - target.delta();
    let span = rational::to_i64(&span.floor()).expect("small weights");
    Ok(top_a + top_b + span - 1)
}

/// Checks `(L(-1) a)_n = -n a_{n-1}` on every vector of `panel`.
pub fn lminus1_derivative_check(params: &ModelParams, a: &FockVector, n: i64, panel: &[FockVector]) -> Result<bool> {
    let da = crate::fock::virasoro(params, -1, a);
    for v in panel {
        let lhs = product(params, &da, n, v)?;
        let rhs = product(params, a, n - 1, v)?.scaled(&int(-n));
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks `[a_m, b_n] v = Σ_{i≥0} C(m, i) (a_i b)_{m+n-i} v`.
pub fn commutator_check(
    params: &ModelParams,
    a: &FockVector,
    m: i64,
    b: &FockVector,
    n: i64,
    v: &FockVector,
) -> Result<bool> {
    let bv = product(params, b, n, v)?;
    let av = product(params, a, m, v)?;
    let lhs = product(params, a, m, &bv)?.minus(&product(params, b, n, &av)?);
    let top = max_nonzero_mode(a, b)?;
    let mut rhs = FockVector::zero(lhs.sector().clone());
    if top >= 0 {
        for (i, aib) in products(params, a, b, 0, top)? {
            if aib.is_zero() {
                continue;
            }
            let term = product(params, &aib, m + n - i, v)?;
            rhs.add_scaled(&term, &binomial_int(m, i as u32));
        }
    }
    Ok(lhs == rhs)
}

/// `Q(a_n b) = (Q a)_n b + a_n (Q b)`.
pub fn q_derivation_check(params: &ModelParams, a: &FockVector, n: i64, b: &FockVector) -> Result<bool> {
    let lhs = screening_q(params, &product(params, a, n, b)?)?;
    let rhs = product(params, &screening_q(params, a)?, n, b)?
        .plus(&product(params, a, n, &screening_q(params, b)?)?);
    Ok(lhs == rhs)
}

/// `wt(a_n b)` for homogeneous inputs.
pub fn product_weight(a: &FockVector, n: i64, b: &FockVector) -> Option<Rational> {
    Some(a.weight()? + b.weight()? - int(n) - int(1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::rat;
    use crate::fock::{heis, virasoro};

    fn model(p: i64) -> ModelParams {
        ModelParams::new(p).unwrap()
    }

    #[test]
    fn schur_low_orders() {
        let m = model(2);
        assert_eq!(schur_vector(&m, 0, 2), m.vacuum());
        // S_1(α) = α(-1) 1 = p β(-1) 1
        assert_eq!(
            schur_vector(&m, 1, 2),
            heis(&m, -1, &m.vacuum()).scaled(&int(2))
        );
        // p = 2: S_3(α) = (1/6 α(-1)^3 + 1/2 α(-2)α(-1) + 1/3 α(-3)) 1, α = 2β
        let mut expected = FockVector::zero(m.vacuum_sector());
        expected.add_term(Partition::new(vec![1, 1, 1]), rat(8, 6));
        expected.add_term(Partition::new(vec![2, 1]), rat(4, 2));
        expected.add_term(Partition::new(vec![3]), rat(2, 3));
        assert_eq!(schur_vector(&m, 3, 2), expected);
    }

    #[test]
    fn schur_generating_function_recursion() {
        // r S_r = Σ_{n=1}^r x_n S_{r-n}, the derivative of the exponential.
        let m = model(3);
        for r in 1..=8u32 {
            let lhs = schur_vector(&m, r, 3).scaled(&int(r as i64));
            let mut rhs = FockVector::zero(m.vacuum_sector());
            for n in 1..=r {
                let xn = heis(&m, -(n as i64), &schur_vector(&m, r - n, 3)).scaled(&int(3));
                rhs.add_scaled(&xn, &int(1));
            }
            assert_eq!(lhs, rhs, "r = {r}");
        }
    }

    #[test]
    fn exponential_relations() {
        for p in 2..=4 {
            let m = model(p);
            let f = m.exponential(-p);
            let alpha = LatticeVector::alpha(&m);
            // e^{α}_0 e^{-α} = S_{2p-1}(α)
            let s = -2 * p; // ⟨α, -α⟩
            let k = -s - 1; // mode 0
            assert_eq!(exp_mode_apply(&m, alpha, k, &f), schur_vector(&m, (2 * p - 1) as u32, p));
            // e^{-α}_i e^{-α} = 0 for i >= -2p
            for i in -2 * p..=2 {
                assert!(product(&m, &f, i, &f).unwrap().is_zero(), "F_{i} F");
            }
            assert!(!product(&m, &f, -2 * p - 1, &f).unwrap().is_zero());
            // ⟨γ, δ⟩ >= 0 ⇒ e^{γ}_i e^{δ} = 0 for i >= 0
            let e = m.exponential(p);
            for i in 0..=3 {
                assert!(product(&m, &e, i, &e).unwrap().is_zero());
                assert!(product(&m, &f, i, &f).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn screening_examples() {
        for p in 2..=3 {
            let m = model(p);
            assert!(screening_q(&m, &m.vacuum()).unwrap().is_zero());
            let f = m.exponential(-p);
            let h = screening_q(&m, &f).unwrap();
            assert_eq!(h, schur_vector(&m, (2 * p - 1) as u32, p));
            assert!(screening_q_power(&m, 3, &f).unwrap().is_zero());
            assert!(!screening_q_power(&m, 2, &f).unwrap().is_zero());
        }
    }

    #[test]
    fn qtilde_domain() {
        let m = model(3);
        // ⟨-β, β⟩ = -2/3 is not an integer.
        let bad = m.exponential(1);
        assert!(matches!(
            screening_qtilde(&m, &bad),
            Err(Error::NonIntegralPairing { .. })
        ));
        assert!(screening_qtilde(&m, &m.exponential(3)).is_ok());
    }

    #[test]
    fn vacuum_axioms() {
        let m = model(2);
        let w = m.omega();
        let vac = m.vacuum();
        for n in -3..=3 {
            let got = product(&m, &vac, n, &w).unwrap();
            if n == -1 {
                assert_eq!(got, w);
            } else {
                assert!(got.is_zero());
            }
        }
        // a_{-1} 1 = a
        let h = screening_q(&m, &m.exponential(-2)).unwrap();
        assert_eq!(product(&m, &h, -1, &vac).unwrap(), h);
        let f = m.exponential(-2);
        assert_eq!(product(&m, &f, -1, &vac).unwrap(), f);
    }

    #[test]
    fn omega_modes_are_virasoro() {
        for p in 2..=3 {
            let m = model(p);
            let w = m.omega();
            let vectors = [
                m.vacuum(),
                heis(&m, -2, &heis(&m, -1, &m.vacuum())),
                m.exponential(-p),
                heis(&m, -1, &m.exponential(p)),
                FockVector::highest(m.continuous(rat(3, 2))),
            ];
            for v in &vectors {
                for n in -3..=3 {
                    assert_eq!(product(&m, &w, n + 1, v).unwrap(), virasoro(&m, n, v), "L({n}) on {v}");
                }
            }
            // ω_1 ω = 2 L(0) ω... = 4ω, ω_3 ω = c/2
            assert_eq!(product(&m, &w, 1, &w).unwrap(), w.scaled(&int(2)));
            assert_eq!(
                product(&m, &w, 3, &w).unwrap(),
                m.vacuum().scaled(&(m.central_charge() / int(2)))
            );
        }
    }

    #[test]
    fn heisenberg_field_modes() {
        let m = model(3);
        let b1 = heis(&m, -1, &m.vacuum());
        let v = heis(&m, -2, &m.exponential(-3));
        for n in -3..=3 {
            assert_eq!(product(&m, &b1, n, &v).unwrap(), heis(&m, n, &v));
        }
    }

    #[test]
    fn derivative_property() {
        let m = model(2);
        let vac = m.vacuum();
        assert!(lminus1_derivative_check(&m, &m.omega(), 0, std::slice::from_ref(&vac)).unwrap());
        let b1 = heis(&m, -1, &vac);
        assert!(lminus1_derivative_check(&m, &b1, 1, std::slice::from_ref(&b1)).unwrap());
    }
}
