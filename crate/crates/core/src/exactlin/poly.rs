//! Sparse univariate and bivariate polynomials over the rationals.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::rational::{int, pow, Rational};

/// Univariate polynomial, stored by exponent. The zero polynomial has empty
/// support.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly1 {
    coeffs: BTreeMap<u32, Rational>,
}

impl Poly1 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(0, c)
    }

    /// The indeterminate itself.
    pub fn x() -> Self {
        Self::monomial(1, Rational::one())
    }

    pub fn monomial(exp: u32, c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, c);
        p
    }

    /// Builds from dense coefficients, lowest degree first.
    pub fn from_coeffs<I: IntoIterator<Item = Rational>>(coeffs: I) -> Self {
        let mut p = Self::zero();
        for (i, c) in coeffs.into_iter().enumerate() {
            p.add_term(i as u32, c);
        }
        p
    }

    /// Product of `(x - r)` over the given roots, times `lead`.
    pub fn from_roots(lead: Rational, roots: &[Rational]) -> Self {
        roots.iter().fold(Self::constant(lead), |acc, r| {
            acc * Self::from_coeffs([-r.clone(), Rational::one()])
        })
    }

    pub fn add_term(&mut self, exp: u32, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(exp).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn coeff(&self, exp: u32) -> Rational {
        self.coeffs.get(&exp).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (u32, &Rational)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    /// Dense coefficient list, lowest degree first; empty for zero.
    pub fn dense(&self) -> Vec<Rational> {
        match self.degree() {
            None => Vec::new(),
            Some(d) => (0..=d).map(|e| self.coeff(e)).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        for (e, v) in self.terms() {
            out.add_term(e, v * c);
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        // Horner over the dense form.
        self.dense()
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    /// `self(inner(t))`.
    pub fn compose(&self, inner: &Poly1) -> Poly1 {
        self.dense()
            .iter()
            .rev()
            .fold(Poly1::zero(), |acc, c| &(&acc * inner) + &Poly1::constant(c.clone()))
    }

    /// `p(t) -> p(a - t)`.
    pub fn reflect(&self, a: &Rational) -> Poly1 {
        self.compose(&Poly1::from_coeffs([a.clone(), -Rational::one()]))
    }

    /// Lagrange interpolation through `(x_k, y_k)`; the `x_k` must be distinct.
    pub fn interpolate(points: &[(Rational, Rational)]) -> Poly1 {
        let mut out = Poly1::zero();
        for (k, (xk, yk)) in points.iter().enumerate() {
            let mut basis = Poly1::one();
            let mut denom = Rational::one();
            for (j, (xj, _)) in points.iter().enumerate() {
                if j == k {
                    continue;
                }
                assert!(xj != xk, "interpolation nodes must be distinct");
                basis = basis * Poly1::from_coeffs([-xj.clone(), Rational::one()]);
                denom *= xk - xj;
            }
            out = out + basis.scale(&(yk / denom));
        }
        out
    }
}

impl Add for &Poly1 {
    type Output = Poly1;
    fn add(self, rhs: &Poly1) -> Poly1 {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, c.clone());
        }
        out
    }
}

impl Add for Poly1 {
    type Output = Poly1;
    fn add(self, rhs: Poly1) -> Poly1 {
        &self + &rhs
    }
}

impl Neg for &Poly1 {
    type Output = Poly1;
    fn neg(self) -> Poly1 {
        self.scale(&-Rational::one())
    }
}

impl Sub for &Poly1 {
    type Output = Poly1;
    fn sub(self, rhs: &Poly1) -> Poly1 {
        self + &(-rhs)
    }
}

impl Sub for Poly1 {
    type Output = Poly1;
    fn sub(self, rhs: Poly1) -> Poly1 {
        &self - &rhs
    }
}

impl Mul for &Poly1 {
    type Output = Poly1;
    fn mul(self, rhs: &Poly1) -> Poly1 {
        let mut out = Poly1::zero();
        for (a, ca) in self.terms() {
            for (b, cb) in rhs.terms() {
                out.add_term(a + b, ca * cb);
            }
        }
        out
    }
}

impl Mul for Poly1 {
    type Output = Poly1;
    fn mul(self, rhs: Poly1) -> Poly1 {
        &self * &rhs
    }
}

impl fmt::Display for Poly1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.terms().rev().map(|(e, c)| (c, vec![("x", e)])))
    }
}

/// Bivariate polynomial in `(x, y)`, stored by exponent pair.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly2 {
    coeffs: BTreeMap<(u32, u32), Rational>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(ex: u32, ey: u32, c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(ex, ey, c);
        p
    }

    /// `f(x)` viewed as a polynomial in `(x, y)`.
    pub fn from_x(f: &Poly1) -> Self {
        Self::from_x_times_y_pow(f, 0)
    }

    /// `f(x) * y^k`.
    pub fn from_x_times_y_pow(f: &Poly1, k: u32) -> Self {
        let mut p = Self::zero();
        for (e, c) in f.terms() {
            p.add_term(e, k, c.clone());
        }
        p
    }

    pub fn add_term(&mut self, ex: u32, ey: u32, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry((ex, ey)).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&(ex, ey));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = ((u32, u32), &Rational)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    pub fn coeff(&self, ex: u32, ey: u32) -> Rational {
        self.coeffs.get(&(ex, ey)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn degree_y(&self) -> Option<u32> {
        self.coeffs.keys().map(|(_, ey)| *ey).max()
    }

    /// Coefficient of `y^k` as a polynomial in `x`.
    pub fn y_coeff(&self, k: u32) -> Poly1 {
        let mut out = Poly1::zero();
        for ((ex, ey), c) in self.terms() {
            if ey == k {
                out.add_term(ex, c.clone());
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        for ((ex, ey), v) in self.terms() {
            out.add_term(ex, ey, v * c);
        }
        out
    }

    pub fn eval(&self, x: &Rational, y: &Rational) -> Rational {
        self.terms().fold(Rational::zero(), |acc, ((ex, ey), c)| {
            acc + c * pow(x, ex) * pow(y, ey)
        })
    }

    /// Substitutes polynomials in one variable for `x` and `y`.
    pub fn eval_poly(&self, x: &Poly1, y: &Poly1) -> Poly1 {
        let mut out = Poly1::zero();
        for ((ex, ey), c) in self.terms() {
            out = out + (&x.pow(ex) * &y.pow(ey)).scale(c);
        }
        out
    }

    /// Division by a polynomial that is monic in `y` of degree `d >= 1`:
    /// returns `(quotient, remainder)` with `deg_y remainder < d`.
    pub fn div_rem_monic_y(&self, divisor: &Poly2) -> (Poly2, Poly2) {
        let d = divisor.degree_y().expect("nonzero divisor");
        assert!(d >= 1, "divisor must have positive degree in y");
        assert_eq!(divisor.y_coeff(d), Poly1::one(), "divisor must be monic in y");
        let mut quotient = Poly2::zero();
        let mut rem = self.clone();
        while let Some(k) = rem.degree_y().filter(|k| *k >= d) {
            let lead = rem.y_coeff(k);
            let step = Poly2::from_x_times_y_pow(&lead, k - d);
            quotient = &quotient + &step;
            rem = &rem - &(&step * divisor);
        }
        (quotient, rem)
    }
}

impl Add for &Poly2 {
    type Output = Poly2;
    fn add(self, rhs: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for ((ex, ey), c) in rhs.terms() {
            out.add_term(ex, ey, c.clone());
        }
        out
    }
}

impl Sub for &Poly2 {
    type Output = Poly2;
    fn sub(self, rhs: &Poly2) -> Poly2 {
        self + &rhs.scale(&-Rational::one())
    }
}

impl Mul for &Poly2 {
    type Output = Poly2;
    fn mul(self, rhs: &Poly2) -> Poly2 {
        let mut out = Poly2::zero();
        for ((ax, ay), ca) in self.terms() {
            for ((bx, by), cb) in rhs.terms() {
                out.add_term(ax + bx, ay + by, ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Highest power of y first.
        let mut terms: Vec<_> = self.terms().collect();
        terms.sort_by_key(|((ex, ey), _)| std::cmp::Reverse((*ey, *ex)));
        write_terms(
            f,
            terms
                .into_iter()
                .map(|((ex, ey), c)| (c, vec![("x", ex), ("y", ey)])),
        )
    }
}

fn write_terms<'a, I>(f: &mut fmt::Formatter<'_>, terms: I) -> fmt::Result
where
    I: Iterator<Item = (&'a Rational, Vec<(&'static str, u32)>)>,
{
    let mut first = true;
    for (c, vars) in terms {
        let vars: Vec<String> = vars
            .into_iter()
            .filter(|(_, e)| *e > 0)
            .map(|(v, e)| if e == 1 { v.to_string() } else { format!("{v}^{e}") })
            .collect();
        let sign = if c < &Rational::zero() { "-" } else { "+" };
        let mag = if c < &Rational::zero() { -c.clone() } else { c.clone() };
        if first {
            if sign == "-" {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {sign} ")?;
        }
        first = false;
        if vars.is_empty() {
            write!(f, "{mag}")?;
        } else if mag == int(1) {
            write!(f, "{}", vars.join("*"))?;
        } else {
            write!(f, "{mag}*{}", vars.join("*"))?;
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::rational::rat;
    use proptest::prelude::*;

    fn arb_poly() -> impl Strategy<Value = Poly1> {
        proptest::collection::vec((-5i64..6, 1i64..4), 0..6)
            .prop_map(|cs| Poly1::from_coeffs(cs.into_iter().map(|(n, d)| rat(n, d))))
    }

    #[test]
    fn zero_has_empty_support() {
        let p = Poly1::from_coeffs([int(0), int(0)]);
        assert!(p.is_zero());
        assert_eq!(p.degree(), None);
        let q = Poly1::x() - Poly1::x();
        assert!(q.is_zero());
    }

    #[test]
    fn display() {
        let p = Poly1::from_coeffs([rat(1, 2), int(0), int(-3), int(1)]);
        assert_eq!(p.to_string(), "x^3 - 3*x^2 + 1/2");
        let q = &Poly2::monomial(0, 2, int(1)) - &Poly2::monomial(1, 0, rat(2, 3));
        assert_eq!(q.to_string(), "y^2 - 2/3*x");
        assert_eq!(Poly1::zero().to_string(), "0");
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let p = Poly1::from_coeffs([int(1), rat(-1, 2), int(0), rat(3, 7)]);
        let pts: Vec<_> = (0..4).map(|i| (int(i), p.eval(&int(i)))).collect();
        assert_eq!(Poly1::interpolate(&pts), p);
    }

    #[test]
    fn division_by_monic_in_y() {
        // P = y^2 - x, K = (x + y) P + 3 x y - 2.
        let p = &Poly2::monomial(0, 2, int(1)) - &Poly2::monomial(1, 0, int(1));
        let a = &Poly2::monomial(1, 0, int(1)) + &Poly2::monomial(0, 1, int(1));
        let r = &Poly2::monomial(1, 1, int(3)) - &Poly2::monomial(0, 0, int(2));
        let k = &(&a * &p) + &r;
        let (q, rem) = k.div_rem_monic_y(&p);
        assert_eq!(q, a);
        assert_eq!(rem, r);
    }

    proptest! {
        #[test]
        fn eval_is_a_ring_map(f in arb_poly(), g in arb_poly(), n in -6i64..7, d in 1i64..5) {
            let r = rat(n, d);
            prop_assert_eq!((&f * &g).eval(&r), f.eval(&r) * g.eval(&r));
            prop_assert_eq!((&f + &g).eval(&r), f.eval(&r) + g.eval(&r));
        }

        #[test]
        fn compose_agrees_with_eval(f in arb_poly(), g in arb_poly(), n in -6i64..7) {
            let r = int(n);
            prop_assert_eq!(f.compose(&g).eval(&r), f.eval(&g.eval(&r)));
        }
    }
}
