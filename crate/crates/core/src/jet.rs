//! Truncated Taylor-series (jet) arithmetic.
//!
//! A [`Jet`] stores the normalized Taylor coefficients `c_j = f^(j)(t0) / j!`
//! of a scalar function at a point.  Arithmetic and elementary functions act
//! on the truncated series, so every derivative up to the jet order comes out
//! exact to machine precision.  Coefficients are kept in normalized form to
//! keep the recurrences overflow-free at high orders.

use crate::error::{Error, Result};

pub const DEFAULT_ORDER: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    coeffs: Vec<f64>,
}

impl Jet {
    pub fn from_coeffs(coeffs: Vec<f64>) -> Self {
        assert!(!coeffs.is_empty(), "a jet carries at least the constant term");
        Jet { coeffs }
    }

    /// Jet of a constant function.
    pub fn constant(value: f64, order: usize) -> Self {
        let mut coeffs = vec![0.0; order + 1];
        coeffs[0] = value;
        Jet { coeffs }
    }

    /// Jet of the identity function at `t0`.
    pub fn variable(t0: f64, order: usize) -> Result<Self> {
        if order < 1 {
            return Err(Error::InvalidOrder(order));
        }
        let mut coeffs = vec![0.0; order + 1];
        coeffs[0] = t0;
        coeffs[1] = 1.0;
        Ok(Jet { coeffs })
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }

    /// `k`-th derivative, i.e. `k! * c_k`.
    pub fn derivative(&self, k: usize) -> Result<f64> {
        if k > self.order() {
            return Err(Error::InsufficientOrder {
                requested: k,
                order: self.order(),
            });
        }
        Ok(factorial(k) * self.coeffs[k])
    }

    /// Restriction to a lower order (identity when `order >= self.order()`).
    pub fn truncated(&self, order: usize) -> Jet {
        let n = order.min(self.order());
        Jet {
            coeffs: self.coeffs[..=n].to_vec(),
        }
    }

    /// Jet of the derivative function, one order lower.
    pub fn deriv(&self) -> Jet {
        if self.order() == 0 {
            return Jet::constant(0.0, 0);
        }
        let coeffs = (1..self.coeffs.len())
            .map(|j| j as f64 * self.coeffs[j])
            .collect();
        Jet { coeffs }
    }

    /// Jet of an antiderivative with constant term `c0`, one order higher.
    pub fn antideriv(&self, c0: f64) -> Jet {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(c0);
        for (j, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c / (j + 1) as f64);
        }
        Jet { coeffs }
    }

    fn common_order(&self, rhs: &Jet) -> usize {
        self.order().min(rhs.order())
    }

    pub fn add(&self, rhs: &Jet) -> Jet {
        let n = self.common_order(rhs);
        let coeffs = (0..=n).map(|j| self.coeffs[j] + rhs.coeffs[j]).collect();
        Jet { coeffs }
    }

    pub fn sub(&self, rhs: &Jet) -> Jet {
        let n = self.common_order(rhs);
        let coeffs = (0..=n).map(|j| self.coeffs[j] - rhs.coeffs[j]).collect();
        Jet { coeffs }
    }

    pub fn neg(&self) -> Jet {
        Jet {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, s: f64) -> Jet {
        Jet {
            coeffs: self.coeffs.iter().map(|c| s * c).collect(),
        }
    }

    pub fn add_scalar(&self, s: f64) -> Jet {
        let mut coeffs = self.coeffs.clone();
        coeffs[0] += s;
        Jet { coeffs }
    }

    /// Cauchy product, truncated to the smaller order.
    pub fn mul(&self, rhs: &Jet) -> Jet {
        let n = self.common_order(rhs);
        let mut coeffs = vec![0.0; n + 1];
        for (k, c) in coeffs.iter_mut().enumerate() {
            let mut acc = 0.0;
            for i in 0..=k {
                acc += self.coeffs[i] * rhs.coeffs[k - i];
            }
            *c = acc;
        }
        Jet { coeffs }
    }

    #[allow(clippy::needless_range_loop)]
    pub fn div(&self, rhs: &Jet) -> Result<Jet> {
        if rhs.coeffs[0] == 0.0 {
            return Err(Error::SingularDivision);
        }
        let n = self.common_order(rhs);
        let mut g = vec![0.0; n + 1];
        for k in 0..=n {
            let mut acc = self.coeffs[k];
            for j in 0..k {
                acc -= g[j] * rhs.coeffs[k - j];
            }
            g[k] = acc / rhs.coeffs[0];
        }
        Ok(Jet { coeffs: g })
    }

    pub fn recip(&self) -> Result<Jet> {
        Jet::constant(1.0, self.order()).div(self)
    }

    /// Integer power; negative exponents require a nonzero constant term.
    pub fn powi(&self, n: i32) -> Result<Jet> {
        if n == 0 {
            return Ok(Jet::constant(1.0, self.order()));
        }
        let mut base = if n < 0 { self.recip()? } else { self.clone() };
        let mut exp = n.unsigned_abs();
        let mut acc = Jet::constant(1.0, self.order());
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            exp >>= 1;
        }
        Ok(acc)
    }

    /// Real power `u^alpha`; requires `u(t0) > 0`.
    pub fn powf(&self, alpha: f64) -> Result<Jet> {
        let u0 = self.coeffs[0];
        if u0 <= 0.0 {
            return Err(Error::FnDomain {
                func: "pow_real",
                value: u0,
            });
        }
        let n = self.order();
        let mut g = vec![0.0; n + 1];
        g[0] = u0.powf(alpha);
        for k in 1..=n {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += ((alpha + 1.0) * j as f64 - k as f64) * self.coeffs[j] * g[k - j];
            }
            g[k] = acc / (k as f64 * u0);
        }
        Ok(Jet { coeffs: g })
    }

    pub fn sqrt(&self) -> Result<Jet> {
        let u0 = self.coeffs[0];
        if u0 <= 0.0 {
            return Err(Error::FnDomain {
                func: "sqrt",
                value: u0,
            });
        }
        let n = self.order();
        let mut g = vec![0.0; n + 1];
        g[0] = u0.sqrt();
        for k in 1..=n {
            let mut acc = self.coeffs[k];
            for j in 1..k {
                acc -= g[j] * g[k - j];
            }
            g[k] = acc / (2.0 * g[0]);
        }
        Ok(Jet { coeffs: g })
    }

    pub fn exp(&self) -> Jet {
        let n = self.order();
        let mut g = vec![0.0; n + 1];
        g[0] = self.coeffs[0].exp();
        for k in 1..=n {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += j as f64 * self.coeffs[j] * g[k - j];
            }
            g[k] = acc / k as f64;
        }
        Jet { coeffs: g }
    }

    #[allow(clippy::needless_range_loop)]
    pub fn ln(&self) -> Result<Jet> {
        let u0 = self.coeffs[0];
        if u0 <= 0.0 {
            return Err(Error::FnDomain {
                func: "log",
                value: u0,
            });
        }
        let n = self.order();
        let mut g = vec![0.0; n + 1];
        g[0] = u0.ln();
        for k in 1..=n {
            let mut acc = k as f64 * self.coeffs[k];
            for j in 1..k {
                acc -= j as f64 * g[j] * self.coeffs[k - j];
            }
            g[k] = acc / (k as f64 * u0);
        }
        Ok(Jet { coeffs: g })
    }

    fn sin_cos(&self) -> (Jet, Jet) {
        let n = self.order();
        let mut s = vec![0.0; n + 1];
        let mut c = vec![0.0; n + 1];
        s[0] = self.coeffs[0].sin();
        c[0] = self.coeffs[0].cos();
        for k in 1..=n {
            let mut sa = 0.0;
            let mut ca = 0.0;
            for j in 1..=k {
                let w = j as f64 * self.coeffs[j];
                sa += w * c[k - j];
                ca += w * s[k - j];
            }
            s[k] = sa / k as f64;
            c[k] = -ca / k as f64;
        }
        (Jet { coeffs: s }, Jet { coeffs: c })
    }

    fn sinh_cosh(&self) -> (Jet, Jet) {
        let n = self.order();
        let mut s = vec![0.0; n + 1];
        let mut c = vec![0.0; n + 1];
        s[0] = self.coeffs[0].sinh();
        c[0] = self.coeffs[0].cosh();
        for k in 1..=n {
            let mut sa = 0.0;
            let mut ca = 0.0;
            for j in 1..=k {
                let w = j as f64 * self.coeffs[j];
                sa += w * c[k - j];
                ca += w * s[k - j];
            }
            s[k] = sa / k as f64;
            c[k] = ca / k as f64;
        }
        (Jet { coeffs: s }, Jet { coeffs: c })
    }

    pub fn sin(&self) -> Jet {
        self.sin_cos().0
    }

    pub fn cos(&self) -> Jet {
        self.sin_cos().1
    }

    pub fn sinh(&self) -> Jet {
        self.sinh_cosh().0
    }

    pub fn cosh(&self) -> Jet {
        self.sinh_cosh().1
    }

    pub fn tan(&self) -> Result<Jet> {
        let (s, c) = self.sin_cos();
        if c.value().abs() < 1e-14 {
            return Err(Error::FnDomain {
                func: "tan",
                value: self.coeffs[0],
            });
        }
        s.div(&c)
    }

    pub fn tanh(&self) -> Result<Jet> {
        let (s, c) = self.sinh_cosh();
        s.div(&c)
    }

    pub fn atan(&self) -> Jet {
        let n = self.order();
        if n == 0 {
            return Jet::constant(self.coeffs[0].atan(), 0);
        }
        let one_plus_sq = self.mul(self).add_scalar(1.0);
        // atan' = u' / (1 + u^2); integrate the quotient series.
        let e = self
            .deriv()
            .div(&one_plus_sq.truncated(n - 1))
            .expect("1 + u^2 has positive constant term");
        e.antideriv(self.coeffs[0].atan())
    }

    /// Evaluate `outer` (Taylor coefficients of g around `inner.value()`) on
    /// the series `inner`, by Horner evaluation in the jet ring.
    pub fn compose(outer: &Jet, inner: &Jet) -> Jet {
        let mut delta = inner.clone();
        delta.coeffs[0] = 0.0;
        let n = inner.order();
        let mut acc = Jet::constant(*outer.coeffs.last().unwrap(), n);
        for j in (0..outer.coeffs.len() - 1).rev() {
            acc = acc.mul(&delta).add_scalar(outer.coeffs[j]);
        }
        acc
    }

    /// Horner evaluation of the truncated polynomial at offset `h`.
    pub fn eval_poly(&self, h: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * h + c;
        }
        acc
    }

    /// Taylor coefficients of the truncated polynomial recentered at offset
    /// `delta` from the base point.
    pub fn recentered(&self, delta: f64) -> Jet {
        let n = self.order();
        let mut out = vec![0.0; n + 1];
        for (j, o) in out.iter_mut().enumerate() {
            // sum_{i >= j} C(i, j) c_i delta^(i-j), binomials built up iteratively
            let mut binom = 1.0;
            let mut pow = 1.0;
            let mut acc = 0.0;
            for i in j..=n {
                acc += binom * pow * self.coeffs[i];
                binom = binom * (i + 1) as f64 / (i + 1 - j) as f64;
                pow *= delta;
            }
            *o = acc;
        }
        Jet { coeffs: out }
    }
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// Named operation dispatch mirroring the public arithmetic surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    PowInt,
    PowReal,
}

pub fn jet_arith(op: ArithOp, lhs: &Jet, rhs: &Jet) -> Result<Jet> {
    if lhs.order() != rhs.order() {
        return Err(Error::InsufficientOrder {
            requested: lhs.order().max(rhs.order()),
            order: lhs.order().min(rhs.order()),
        });
    }
    match op {
        ArithOp::Add => Ok(lhs.add(rhs)),
        ArithOp::Sub => Ok(lhs.sub(rhs)),
        ArithOp::Mul => Ok(lhs.mul(rhs)),
        ArithOp::Div => lhs.div(rhs),
        ArithOp::PowInt => {
            let n = rhs.value();
            if n.fract() != 0.0 {
                return Err(Error::FnDomain {
                    func: "pow_int",
                    value: n,
                });
            }
            lhs.powi(n as i32)
        }
        ArithOp::PowReal => lhs.powf(rhs.value()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElemFn {
    Exp,
    Log,
    Sin,
    Cos,
    Sinh,
    Cosh,
    Tan,
    Tanh,
    Sqrt,
    Atan,
}

pub fn jet_elem(f: ElemFn, x: &Jet) -> Result<Jet> {
    match f {
        ElemFn::Exp => Ok(x.exp()),
        ElemFn::Log => x.ln(),
        ElemFn::Sin => Ok(x.sin()),
        ElemFn::Cos => Ok(x.cos()),
        ElemFn::Sinh => Ok(x.sinh()),
        ElemFn::Cosh => Ok(x.cosh()),
        ElemFn::Tan => x.tan(),
        ElemFn::Tanh => x.tanh(),
        ElemFn::Sqrt => x.sqrt(),
        ElemFn::Atan => Ok(x.atan()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn jet(coeffs: &[f64]) -> Jet {
        Jet::from_coeffs(coeffs.to_vec())
    }

    #[test]
    fn variable_jets() {
        assert_eq!(
            Jet::variable(2.0, 3).unwrap().coeffs(),
            &[2.0, 1.0, 0.0, 0.0]
        );
        assert_eq!(Jet::variable(0.0, 1).unwrap().coeffs(), &[0.0, 1.0]);
        assert_eq!(
            Jet::variable(-1.5, 5).unwrap().coeffs(),
            &[-1.5, 1.0, 0.0, 0.0, 0.0, 0.0]
        );
        assert!(matches!(Jet::variable(1.0, 0), Err(Error::InvalidOrder(0))));
    }

    #[test]
    fn arithmetic_examples() {
        let sq = jet(&[1.0, 1.0, 0.0]).mul(&jet(&[1.0, 1.0, 0.0]));
        assert_eq!(sq.coeffs(), &[1.0, 2.0, 1.0]);

        let geo = jet(&[1.0, 0.0, 0.0]).div(&jet(&[1.0, 1.0, 0.0])).unwrap();
        assert_eq!(geo.coeffs(), &[1.0, -1.0, 1.0]);

        // sqrt(4 + h), frozen coefficients
        let r = jet(&[4.0, 1.0, 0.0, 0.0]).powf(0.5).unwrap();
        let expect = [2.0, 0.25, -0.015625, 0.001953125];
        for (c, e) in r.coeffs().iter().zip(expect) {
            assert_relative_eq!(c, &e, max_relative = 1e-14);
        }
        let r2 = jet(&[4.0, 1.0, 0.0, 0.0]).sqrt().unwrap();
        for (c, e) in r2.coeffs().iter().zip(expect) {
            assert_relative_eq!(c, &e, max_relative = 1e-14);
        }
    }

    #[test]
    fn elementary_series() {
        let h = Jet::variable(0.0, 3).unwrap();
        let e = h.exp();
        assert_relative_eq!(e.coeffs()[2], 0.5, max_relative = 1e-15);
        assert_relative_eq!(e.coeffs()[3], 1.0 / 6.0, max_relative = 1e-15);

        let c = Jet::variable(0.0, 2).unwrap().cos();
        assert_eq!(c.coeffs()[0], 1.0);
        assert_eq!(c.coeffs()[1], 0.0);
        assert_relative_eq!(c.coeffs()[2], -0.5, max_relative = 1e-15);

        // tanh Maclaurin: [0, 1, 0, -1/3, 0]
        let t = Jet::variable(0.0, 4).unwrap().tanh().unwrap();
        assert_relative_eq!(t.coeffs()[1], 1.0, max_relative = 1e-15);
        assert_relative_eq!(t.coeffs()[3], -1.0 / 3.0, max_relative = 1e-14);
        assert!(t.coeffs()[4].abs() < 1e-15);
    }

    #[test]
    fn derivative_extraction() {
        assert_eq!(jet(&[1.0, 2.0, 3.0]).derivative(2).unwrap(), 6.0);
        assert_eq!(jet(&[5.0, 0.0, 0.0]).derivative(0).unwrap(), 5.0);
        let e = Jet::variable(0.0, 5).unwrap().exp();
        assert_relative_eq!(e.derivative(4).unwrap(), 1.0, max_relative = 1e-13);
        assert!(jet(&[1.0, 2.0]).derivative(2).is_err());
    }

    #[test]
    fn named_dispatch_surface() {
        let a = jet(&[1.0, 1.0, 0.0]);
        let b = jet(&[1.0, 2.0, 1.0]);
        assert_eq!(
            jet_arith(ArithOp::Add, &a, &b).unwrap().coeffs(),
            &[2.0, 3.0, 1.0]
        );
        assert_eq!(
            jet_arith(ArithOp::Sub, &b, &a).unwrap().coeffs(),
            &[0.0, 1.0, 1.0]
        );
        let p = jet_arith(ArithOp::PowInt, &a, &Jet::constant(2.0, 2)).unwrap();
        assert_eq!(p.coeffs(), &[1.0, 2.0, 1.0]);
        // fractional exponent through the integer branch is a domain error
        assert!(jet_arith(ArithOp::PowInt, &a, &Jet::constant(0.5, 2)).is_err());
        // mismatched orders are rejected on the named surface
        assert!(matches!(
            jet_arith(ArithOp::Add, &a, &jet(&[1.0, 1.0])),
            Err(Error::InsufficientOrder { .. })
        ));
        let e = jet_elem(ElemFn::Exp, &Jet::variable(0.0, 3).unwrap()).unwrap();
        assert_relative_eq!(e.coeffs()[3], 1.0 / 6.0, max_relative = 1e-15);
        assert!(jet_elem(ElemFn::Log, &jet(&[-1.0, 0.0])).is_err());
        assert!(jet_elem(ElemFn::Sqrt, &jet(&[0.0, 1.0])).is_err());
    }

    #[test]
    fn pole_errors() {
        assert!(matches!(
            jet(&[1.0, 0.0]).div(&jet(&[0.0, 1.0])),
            Err(Error::SingularDivision)
        ));
        assert!(jet(&[-1.0, 0.0]).powf(0.5).is_err());
        assert!(jet(&[0.0, 1.0]).ln().is_err());
        assert!(jet(&[std::f64::consts::FRAC_PI_2, 1.0]).tan().is_err());
    }

    #[test]
    fn recentering_matches_fresh_expansion() {
        let t = Jet::variable(0.5, 6).unwrap();
        let f = t.sin().mul(&t.exp());
        let shifted = f.recentered(0.2);
        let g = Jet::variable(0.7, 6).unwrap();
        let fresh = g.sin().mul(&g.exp());
        // low coefficients agree up to the truncation error of the shift
        for j in 0..3 {
            assert_relative_eq!(
                shifted.coeffs()[j],
                fresh.coeffs()[j],
                epsilon = 1e-6,
                max_relative = 1e-5
            );
        }
        // exact on polynomials
        let p = Jet::from_coeffs(vec![1.0, -2.0, 3.0, 0.5]);
        let back = p.recentered(0.3).recentered(-0.3);
        for (a, b) in back.coeffs().iter().zip(p.coeffs()) {
            assert_relative_eq!(a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn compose_matches_direct() {
        // g(u) = exp(u) around u0 = sin(0.4); compose with u = sin(t)
        let t = Jet::variable(0.4, 6).unwrap();
        let inner = t.sin();
        let outer = Jet::variable(inner.value(), 6).unwrap().exp();
        let composed = Jet::compose(&outer, &inner);
        let direct = inner.exp();
        for (a, b) in composed.coeffs().iter().zip(direct.coeffs()) {
            assert_relative_eq!(a, b, max_relative = 1e-12, epsilon = 1e-14);
        }
    }

    /// Central finite differences of the scalar evaluation, the independent
    /// oracle for the chain rule.
    fn fd_derivative(f: impl Fn(f64) -> f64, t: f64, k: usize, h: f64) -> f64 {
        match k {
            1 => (f(t + h) - f(t - h)) / (2.0 * h),
            2 => (f(t + h) - 2.0 * f(t) + f(t - h)) / (h * h),
            3 => (f(t + 2.0 * h) - 2.0 * f(t + h) + 2.0 * f(t - h) - f(t - 2.0 * h))
                / (2.0 * h * h * h),
            _ => unreachable!(),
        }
    }

    #[test]
    #[allow(clippy::type_complexity)]
    fn chain_rule_against_finite_differences() {
        // composite expressions evaluated both as jets and as plain scalars
        let cases: Vec<(fn(&Jet) -> Jet, fn(f64) -> f64)> = vec![
            (
                |j| j.sin().mul(&j.exp()).add_scalar(2.0),
                |t| t.sin() * t.exp() + 2.0,
            ),
            (
                |j| j.cosh().div(&j.cos().add_scalar(3.0)).unwrap(),
                |t| t.cosh() / (t.cos() + 3.0),
            ),
            (
                |j| j.mul(j).add_scalar(1.0).sqrt().unwrap().atan(),
                |t| (t * t + 1.0_f64).sqrt().atan(),
            ),
            (
                |j| j.tanh().unwrap().exp().mul(&j.sin()),
                |t| t.tanh().exp() * t.sin(),
            ),
        ];
        let h = 1e-3;
        for t0 in [-1.1, 0.3, 0.9] {
            for (jf, sf) in &cases {
                let j = jf(&Jet::variable(t0, 5).unwrap());
                for k in 1..=3usize {
                    let exact = j.derivative(k).unwrap();
                    let fd = fd_derivative(sf, t0, k, h);
                    assert_relative_eq!(exact, fd, max_relative = 1e-5, epsilon = 1e-7);
                }
            }
        }
    }

    fn arb_jet(order: usize) -> impl Strategy<Value = Jet> {
        proptest::collection::vec(-3.0f64..3.0, order + 1).prop_map(Jet::from_coeffs)
    }

    fn close(a: &Jet, b: &Jet, tol: f64) -> bool {
        let scale = a
            .coeffs()
            .iter()
            .chain(b.coeffs())
            .fold(1.0f64, |m, c| m.max(c.abs()));
        a.coeffs()
            .iter()
            .zip(b.coeffs())
            .all(|(x, y)| (x - y).abs() <= tol * scale)
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_jet(6), b in arb_jet(6), c in arb_jet(6)) {
            prop_assert!(close(&a.mul(&b), &b.mul(&a), 1e-12));
            prop_assert!(close(&a.mul(&b).mul(&c), &a.mul(&b.mul(&c)), 1e-12));
            prop_assert!(close(&a.mul(&b.add(&c)), &a.mul(&b).add(&a.mul(&c)), 1e-12));
        }

        #[test]
        fn div_inverts_mul(
            a in arb_jet(6),
            b in arb_jet(6),
            c0 in 1.0f64..3.0,
            negative in proptest::bool::ANY,
        ) {
            // well-conditioned divisor: |b_0| in [1, 3]
            let mut coeffs = b.coeffs().to_vec();
            coeffs[0] = if negative { -c0 } else { c0 };
            let b = Jet::from_coeffs(coeffs);
            let back = a.mul(&b).div(&b).unwrap();
            prop_assert!(close(&back, &a, 1e-12));
        }
    }
}
