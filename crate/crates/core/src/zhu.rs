//! Zhu's algebra of `ker Q̃`: the products `*` and `∘`, reduction of
//! Virasoro words modulo `O(V)`, the polynomial `g` with `[H]*[H] = g([ω])`,
//! the curve `P(x, y) = y² - g(x)` and top-level eigenvalues on Fock modules.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactlin::rational::factorial;
use crate::exactlin::{binomial, binomial_int, int, rat, Poly1, Poly2, Rational};
use crate::fock::{FockVector, ModelParams};
use crate::vertexops::products;
use crate::walgebra::{express_in_pbw, Generators, VirasoroWord};

fn integral_weight(a: &FockVector) -> Result<u32> {
    let level = a.level().ok_or(Error::NotHomogeneous("Zhu product needs a homogeneous left factor"))?;
    // Charge-zero vectors have conformal weight equal to their level.
    if !a.sector().delta().is_zero() {
        return Err(Error::NotHomogeneous("left factor must lie in the charge-zero sector"));
    }
    Ok(level)
}

/// `Σ_{i≥0} C(wt a, i) a_{i+shift} b`.
fn binomial_sum(params: &ModelParams, a: &FockVector, b: &FockVector, shift: i64) -> Result<FockVector> {
    let mut out = FockVector::zero(b.sector().clone());
    if a.is_zero() || b.is_zero() {
        return Ok(out);
    }
    let wt = integral_weight(a)?;
    let modes = products(params, a, b, shift, wt as i64 + shift)?;
    for i in 0..=wt {
        if let Some(v) = modes.get(&(i as i64 + shift)) {
            out.add_scaled(v, &binomial_int(wt as i64, i));
        }
    }
    Ok(out)
}

/// `a * b = Σ_{i≥0} C(wt a, i) a_{i-1} b`.
pub fn zhu_star(params: &ModelParams, a: &FockVector, b: &FockVector) -> Result<FockVector> {
    binomial_sum(params, a, b, -1)
}

/// `a ∘ b = Σ_{i≥0} C(wt a, i) a_{i-2} b`.
pub fn zhu_circ(params: &ModelParams, a: &FockVector, b: &FockVector) -> Result<FockVector> {
    binomial_sum(params, a, b, -2)
}

/// Class of `L(-n) b` as a multiplier of the class of `b`, where `b` has
/// weight `w`: `f_1 = -w`, `f_2 = x + w`, `f_n = -2 f_{n-1} - f_{n-2}`.
fn lowering_factor(n: u32, w: u32) -> Poly1 {
    let w = int(w as i64);
    let f1 = Poly1::constant(-w.clone());
    let f2 = Poly1::x() + Poly1::constant(w);
    match n {
        0 => panic!("L(0) is not a lowering operator"),
        1 => f1,
        _ => {
            let (mut prev, mut cur) = (f1, f2);
            for _ in 3..=n {
                let next = cur.scale(&int(-2)) - prev;
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}

/// Normal form in `C[x]`, `x = [ω]`, of a combination of words applied to
/// the vacuum. Rewrites from the rightmost operator outward.
pub fn reduce(words: &[VirasoroWord]) -> Poly1 {
    let mut out = Poly1::zero();
    for word in words {
        let mut class = Poly1::one();
        let mut w = 0;
        for &n in word.parts.iter().rev() {
            class = lowering_factor(n, w) * class;
            w += n;
        }
        out = out + class.scale(&word.coefficient);
    }
    out
}

/// Class of a vector of `ker Q` as a polynomial in `[ω]`.
pub fn class_of(params: &ModelParams, v: &FockVector) -> Result<Poly1> {
    let top = v.levels().last().copied().unwrap_or(0);
    Ok(reduce(&express_in_pbw(params, v, top)?))
}

/// `C_p = (4p)^{2p-1} / ((2p-1)!)²`.
pub fn c_p(p: u32) -> Rational {
    let num = BigInt::from(4 * p).pow(2 * p - 1);
    let den = factorial(2 * p - 1).pow(2);
    Rational::new(num, den)
}

/// `u(t) = t (t - 2(p-1)) / 4p`.
pub fn u_poly(p: u32) -> Poly1 {
    Poly1::from_roots(rat(1, 4 * p as i64), &[int(0), int(2 * (p as i64 - 1))])
}

/// `v(t) = C(t, 2p-1)`.
pub fn v_poly(p: u32) -> Poly1 {
    let k = 2 * p - 1;
    let roots: Vec<Rational> = (0..k as i64).map(int).collect();
    let lead = Rational::new(BigInt::one(), factorial(k));
    Poly1::from_roots(lead, &roots)
}

/// Closed form `C_p (x + (p-1)²/4p) Π_{i=0}^{p-2} (x + i(2p-2-i)/4p)²`.
pub fn g_closed_form(p: u32) -> Poly1 {
    let pp = p as i64;
    let mut roots = vec![rat(-(pp - 1) * (pp - 1), 4 * pp)];
    for i in 0..=pp - 2 {
        let r = rat(-i * (2 * pp - 2 - i), 4 * pp);
        roots.push(r.clone());
        roots.push(r);
    }
    Poly1::from_roots(c_p(p), &roots)
}

/// `g` from `g(u(t)) = v(t)²` at `t = 2p, …, 4p-1`.
pub fn g_by_interpolation(p: u32) -> Poly1 {
    let (u, v) = (u_poly(p), v_poly(p));
    let nodes: Vec<(Rational, Rational)> = (2 * p..4 * p)
        .map(|t| {
            let t = int(t as i64);
            (u.eval(&t), v.eval(&t).pow(2))
        })
        .collect();
    Poly1::interpolate(&nodes)
}

/// `g` as the class of `H * H`.
pub fn g_by_reduction(params: &ModelParams) -> Result<Poly1> {
    let h = Generators::new(params).h;
    class_of(params, &zhu_star(params, &h, &h)?)
}

/// `g` by both routes, which must agree.
pub fn compute_g(params: &ModelParams) -> Result<Poly1> {
    let (a, b) = rayon::join(|| g_by_interpolation(params.p()), || g_by_reduction(params));
    let b = b?;
    if a != b {
        return Err(Error::RouteMismatch(format!("interpolation gives {a}, reduction gives {b}")));
    }
    Ok(a)
}

/// The curve `P(x, y) = y² - g(x) = 0` and its parameterization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveData {
    pub p: u32,
    pub c_p: Rational,
    pub poly: Poly2,
    pub u: Poly1,
    pub v: Poly1,
    pub g: Poly1,
    pub central_charge: Rational,
}

impl CurveData {
    /// Assembles the curve from the interpolated `g`; panics if an invariant
    /// fails, since each one is an identity of polynomials.
    pub fn new(params: &ModelParams) -> Self {
        let p = params.p();
        let g = g_by_interpolation(p);
        let mut poly = Poly2::monomial(0, 2, Rational::one());
        poly = &poly - &Poly2::from_x(&g);
        let data = Self {
            p,
            c_p: c_p(p),
            poly,
            u: u_poly(p),
            v: v_poly(p),
            g,
            central_charge: params.central_charge().clone(),
        };
        data.check().expect("curve invariants are polynomial identities");
        data
    }

    pub fn check(&self) -> std::result::Result<(), String> {
        let mirror = int(2 * (self.p as i64 - 1));
        if self.g != g_closed_form(self.p) {
            return Err(format!("g = {} differs from the product formula", self.g));
        }
        if self.g.degree() != Some(2 * self.p - 1) || self.g.coeff(2 * self.p - 1) != self.c_p {
            return Err("leading coefficient of g is not C_p".into());
        }
        if self.poly.degree_y() != Some(2) {
            return Err("P is not quadratic in y".into());
        }
        if !self.poly.eval_poly(&self.u, &self.v).is_zero() {
            return Err("P(u(t), v(t)) is not identically zero".into());
        }
        if self.u.reflect(&mirror) != self.u {
            return Err("u is not symmetric".into());
        }
        if self.v.reflect(&mirror) != self.v.scale(&int(-1)) {
            return Err("v is not antisymmetric".into());
        }
        Ok(())
    }

    pub fn point(&self, t: &Rational) -> (Rational, Rational) {
        (self.u.eval(t), self.v.eval(t))
    }

    pub fn on_curve(&self, x: &Rational, y: &Rational) -> bool {
        self.poly.eval(x, y).is_zero()
    }
}

pub fn curve(params: &ModelParams) -> CurveData {
    CurveData::new(params)
}

/// One row of the classification table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HighestWeight {
    pub t: Rational,
    pub x: Rational,
    pub y: Rational,
}

/// Irreducible modules are `L(x, y)` with `P(x, y) = 0`, equivalently
/// `(x, y) = (u(t), v(t))`. Distinct `t` share a point only when they are
/// swapped by `t ↦ 2(p-1) - t` and `v(t) = 0`, i.e. `t ∈ {0, …, 2p-2}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub curve: CurveData,
    pub samples: Vec<HighestWeight>,
}

pub const INJECTIVITY_NOTE: &str =
    "t and s give the same point iff s = t or s = 2(p-1) - t with t in {0, ..., 2p-2}";

/// Sample table for `t = 0, …, 2p`, each row checked against `P = 0`.
pub fn classify(params: &ModelParams) -> Classification {
    let curve = curve(params);
    let samples = (0..=2 * params.p_i64())
        .map(|t| {
            let t = int(t);
            let (x, y) = curve.point(&t);
            assert!(curve.on_curve(&x, &y), "sample off the curve");
            HighestWeight { t, x, y }
        })
        .collect();
    Classification { curve, samples }
}

/// Eigenvalue of `o(a) = a_{wt a - 1}` on `v_λ` with `⟨λ, α⟩ = t`;
/// inhomogeneous `a` acts componentwise.
pub fn top_level_eval(params: &ModelParams, a: &FockVector, t: &Rational) -> Result<Rational> {
    let v = FockVector::highest(params.continuous(t.clone()));
    let mut total = Rational::zero();
    for level in a.levels() {
        let comp = a.level_component(level);
        let wt = integral_weight(&comp)? as i64;
        let out = products(params, &comp, &v, wt - 1, wt - 1)?
            .remove(&(wt - 1))
            .unwrap_or_else(|| FockVector::zero(v.sector().clone()));
        if out.terms().any(|(m, _)| !m.is_empty()) {
            return Err(Error::NotHomogeneous("zero mode left the top level"));
        }
        total += out.coeff(&crate::fock::Partition::empty());
    }
    Ok(total)
}

/// `top_level_eval` as a polynomial in `t`, by interpolation on
/// `wt + 2` nodes; the extra node certifies the degree bound.
pub fn top_level_eval_symbolic(params: &ModelParams, a: &FockVector) -> Result<Poly1> {
    let bound = a.levels().last().copied().unwrap_or(0);
    let nodes: Vec<(Rational, Rational)> = (0..=bound as i64 + 1)
        .map(|t| Ok((int(t), top_level_eval(params, a, &int(t))?)))
        .collect::<Result<_>>()?;
    let poly = Poly1::interpolate(&nodes[..nodes.len() - 1]);
    let (t, y) = nodes.last().unwrap();
    assert_eq!(&poly.eval(t), y, "zero-mode eigenvalue exceeds the degree bound");
    Ok(poly)
}

/// `K ∈ ⟨P⟩`, by division in `y` (`P` is monic of degree 2 in `y`).
pub fn ideal_member(curve: &CurveData, k: &Poly2) -> bool {
    k.div_rem_monic_y(&curve.poly).1.is_zero()
}

/// `K(u(t), v(t)) = 0` at `4p` sample values of `t`.
pub fn vanishes_on_samples(curve: &CurveData, k: &Poly2) -> bool {
    (0..4 * curve.p as i64).all(|t| {
        let (x, y) = curve.point(&int(t));
        k.eval(&x, &y).is_zero()
    })
}

/// `B(u(t)) v(t)`, the odd part of a remainder `B(x) y + C(x)` on the curve.
pub fn odd_part(curve: &CurveData, b: &Poly1) -> Poly1 {
    b.compose(&curve.u) * curve.v.clone()
}

/// `C(u(t))`, the even part of a remainder on the curve.
pub fn even_part(curve: &CurveData, c: &Poly1) -> Poly1 {
    c.compose(&curve.u)
}

/// `t ≠ s` with `(u(t), v(t)) = (u(s), v(s))`.
pub fn collide(p: u32, t: &Rational, s: &Rational) -> bool {
    let (u, v) = (u_poly(p), v_poly(p));
    t != s && u.eval(t) == u.eval(s) && v.eval(t) == v.eval(s)
}

/// Binomial `C(t, k)` for rational `t`.
pub fn top_binomial(t: &Rational, k: u32) -> Rational {
    binomial(t, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::virasoro;
    use crate::walgebra::{apply_word, words_of_weight};

    fn model(p: i64) -> ModelParams {
        ModelParams::new(p).unwrap()
    }

    #[test]
    fn star_with_vacuum_and_omega() {
        let m = model(2);
        let h = Generators::new(&m).h;
        assert_eq!(zhu_star(&m, &m.vacuum(), &h).unwrap(), h);
        let w = m.omega();
        let expected = virasoro(&m, -2, &h)
            .plus(&virasoro(&m, -1, &h).scaled(&int(2)))
            .plus(&virasoro(&m, 0, &h));
        assert_eq!(zhu_star(&m, &w, &h).unwrap(), expected);
    }

    #[test]
    fn circ_of_omega_and_vacuum() {
        let m = model(3);
        let got = zhu_circ(&m, &m.omega(), &m.vacuum()).unwrap();
        let expected = virasoro(&m, -3, &m.vacuum()).plus(&m.omega().scaled(&int(2)));
        assert_eq!(got, expected);
        assert_eq!(got.levels(), vec![2, 3]);
    }

    #[test]
    fn circ_classes_vanish() {
        let m = model(2);
        for wt in 0..=4 {
            for parts in words_of_weight(wt, 2) {
                let b = apply_word(&m, &parts, &m.vacuum());
                let c = zhu_circ(&m, &m.omega(), &b).unwrap();
                assert!(class_of(&m, &c).unwrap().is_zero(), "{parts:?}");
            }
        }
    }

    #[test]
    fn reduction_basics() {
        let w = |parts: Vec<u32>| VirasoroWord {
            parts,
            coefficient: int(1),
        };
        assert_eq!(reduce(&[w(vec![2])]), Poly1::x());
        assert_eq!(reduce(&[]), Poly1::zero());
        let m = model(2);
        let ww = zhu_star(&m, &m.omega(), &m.omega()).unwrap();
        assert_eq!(class_of(&m, &ww).unwrap(), Poly1::x().pow(2));
    }

    #[test]
    fn g_routes_agree() {
        for p in 2..=3 {
            let m = model(p);
            let g = compute_g(&m).unwrap();
            assert_eq!(g, g_closed_form(p as u32));
        }
        let expected = Poly1::from_roots(rat(128, 9), &[int(0), int(0), rat(-1, 8)]);
        assert_eq!(g_by_interpolation(2), expected);
        assert_eq!(c_p(3), rat(432, 25));
    }

    #[test]
    fn curve_examples() {
        let m = model(2);
        let c = curve(&m);
        assert_eq!(c.u, Poly1::from_coeffs([int(0), rat(-1, 4), rat(1, 8)]));
        assert_eq!(c.v, Poly1::from_coeffs([int(0), rat(1, 3), rat(-1, 2), rat(1, 6)]));
        assert_eq!(c.central_charge, int(-2));
        for p in 3..=5 {
            assert!(curve(&model(p)).check().is_ok());
        }
    }

    #[test]
    fn classification_table() {
        let m = model(2);
        let cls = classify(&m);
        assert_eq!(cls.samples.len(), 5);
        assert_eq!((cls.samples[0].x.clone(), cls.samples[0].y.clone()), (int(0), int(0)));
        assert_eq!((cls.samples[3].x.clone(), cls.samples[3].y.clone()), (rat(3, 8), int(1)));
        // t = 0 and t = 2 both give the vacuum point.
        assert!(collide(2, &int(0), &int(2)));
        assert!(!collide(2, &int(1), &int(3)));
        assert!(!collide(2, &int(3), &int(-1)));
    }

    #[test]
    fn zero_modes_on_top_level() {
        for p in 2..=3 {
            let m = model(p);
            let h = Generators::new(&m).h;
            assert_eq!(top_level_eval_symbolic(&m, &m.omega()).unwrap(), u_poly(p as u32));
            assert_eq!(top_level_eval_symbolic(&m, &h).unwrap(), v_poly(p as u32));
            for k in 0..2 * p + 2 {
                let t = rat(2 * k - 3, 3);
                assert_eq!(top_level_eval(&m, &h, &t).unwrap(), top_binomial(&t, 2 * p as u32 - 1));
            }
        }
        let m = model(2);
        assert!(top_level_eval(&m, &Generators::new(&m).h, &int(1)).unwrap().is_zero());
    }

    #[test]
    fn omega_commutes_with_h_on_top_level() {
        let m = model(2);
        let h = Generators::new(&m).h;
        let wh = zhu_star(&m, &m.omega(), &h).unwrap();
        let hw = zhu_star(&m, &h, &m.omega()).unwrap();
        for t in 0..6 {
            let t = rat(t, 2);
            assert_eq!(top_level_eval(&m, &wh, &t).unwrap(), top_level_eval(&m, &hw, &t).unwrap());
        }
    }

    #[test]
    fn ideal_membership_by_division() {
        let c = curve(&model(2));
        let a = Poly2::monomial(1, 1, int(3));
        let k = &(&a * &c.poly) + &Poly2::zero();
        assert!(ideal_member(&c, &k));
        assert!(vanishes_on_samples(&c, &k));
        let b = Poly1::x();
        let k2 = &k + &Poly2::from_x_times_y_pow(&b, 1);
        assert!(!ideal_member(&c, &k2));
        assert!(!vanishes_on_samples(&c, &k2));
        assert_eq!(odd_part(&c, &b).degree().map(|d| d % 2), Some(1));
        assert_eq!(even_part(&c, &b).degree().map(|d| d % 2), Some(0));
    }
}
