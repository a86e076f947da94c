//! Truncated univariate power series (Taylor-mode differentiation).
//!
//! A `Taylor` holds the coefficients `c[k]` of `s^k` about some expansion
//! point. Binary operations truncate to the shorter operand.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone, Debug, PartialEq)]
pub struct Taylor {
    c: Vec<f64>,
}

impl Taylor {
    pub fn from_coeffs(c: Vec<f64>) -> Self {
        assert!(!c.is_empty(), "a series needs at least one coefficient");
        Self { c }
    }

    /// The constant `value` with `len` coefficients.
    pub fn constant(value: f64, len: usize) -> Self {
        let mut c = vec![0.0; len.max(1)];
        c[0] = value;
        Self { c }
    }

    /// The independent variable `x0 + s`.
    pub fn variable(x0: f64, len: usize) -> Self {
        let mut t = Self::constant(x0, len);
        if t.c.len() > 1 {
            t.c[1] = 1.0;
        }
        t
    }

    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.c
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// k-th derivative at the expansion point.
    pub fn derivative_at(&self, k: usize) -> f64 {
        let mut f = 1.0;
        for j in 2..=k {
            f *= j as f64;
        }
        self.c.get(k).copied().unwrap_or(0.0) * f
    }

    pub fn truncate(&self, len: usize) -> Self {
        Self { c: self.c[..len.min(self.c.len()).max(1)].to_vec() }
    }

    /// d/ds, one coefficient shorter.
    pub fn derivative(&self) -> Self {
        if self.c.len() == 1 {
            return Self::constant(0.0, 1);
        }
        Self { c: (1..self.c.len()).map(|k| k as f64 * self.c[k]).collect() }
    }

    /// Horner evaluation at offset `s`.
    pub fn eval(&self, s: f64) -> f64 {
        self.c.iter().rev().fold(0.0, |acc, &a| acc * s + a)
    }

    pub fn scale(&self, a: f64) -> Self {
        Self { c: self.c.iter().map(|x| a * x).collect() }
    }

    pub fn add_scalar(&self, a: f64) -> Self {
        let mut t = self.clone();
        t.c[0] += a;
        t
    }

    pub fn recip(&self) -> Self {
        let n = self.c.len();
        let a0 = self.c[0];
        let mut r = vec![0.0; n];
        r[0] = 1.0 / a0;
        for k in 1..n {
            let mut s = 0.0;
            for j in 1..=k {
                s += self.c[j] * r[k - j];
            }
            r[k] = -s / a0;
        }
        Self { c: r }
    }

    pub fn exp(&self) -> Self {
        let n = self.c.len();
        let mut e = vec![0.0; n];
        e[0] = self.c[0].exp();
        for k in 1..n {
            let mut s = 0.0;
            for j in 1..=k {
                s += j as f64 * self.c[j] * e[k - j];
            }
            e[k] = s / k as f64;
        }
        Self { c: e }
    }

    pub fn ln(&self) -> Self {
        let n = self.c.len();
        let a0 = self.c[0];
        let mut l = vec![0.0; n];
        l[0] = a0.ln();
        for k in 1..n {
            let mut s = 0.0;
            for j in 1..k {
                s += j as f64 * l[j] * self.c[k - j];
            }
            l[k] = (self.c[k] - s / k as f64) / a0;
        }
        Self { c: l }
    }

    pub fn sqrt(&self) -> Self {
        let n = self.c.len();
        let mut r = vec![0.0; n];
        r[0] = self.c[0].sqrt();
        for k in 1..n {
            let mut s = 0.0;
            for j in 1..k {
                s += r[j] * r[k - j];
            }
            r[k] = (self.c[k] - s) / (2.0 * r[0]);
        }
        Self { c: r }
    }

    /// `(sin, cos)` of the series.
    pub fn sin_cos(&self) -> (Self, Self) {
        self.trig_pair(-1.0)
    }

    /// `(sinh, cosh)` of the series.
    pub fn sinh_cosh(&self) -> (Self, Self) {
        self.trig_pair(1.0)
    }

    // s' = c a', c' = sign * s a'
    fn trig_pair(&self, sign: f64) -> (Self, Self) {
        let n = self.c.len();
        let a0 = self.c[0];
        let mut s = vec![0.0; n];
        let mut c = vec![0.0; n];
        if sign < 0.0 {
            s[0] = a0.sin();
            c[0] = a0.cos();
        } else {
            s[0] = a0.sinh();
            c[0] = a0.cosh();
        }
        for k in 1..n {
            let mut ss = 0.0;
            let mut cc = 0.0;
            for j in 1..=k {
                let ja = j as f64 * self.c[j];
                ss += ja * c[k - j];
                cc += ja * s[k - j];
            }
            s[k] = ss / k as f64;
            c[k] = sign * cc / k as f64;
        }
        (Self { c: s }, Self { c })
    }

    pub fn sin(&self) -> Self {
        self.sin_cos().0
    }

    pub fn cos(&self) -> Self {
        self.sin_cos().1
    }

    pub fn tanh(&self) -> Self {
        let (s, c) = self.sinh_cosh();
        &s / &c
    }

    pub fn sech(&self) -> Self {
        self.sinh_cosh().1.recip()
    }

    pub fn powi(&self, k: i32) -> Self {
        if k < 0 {
            return self.powi(-k).recip();
        }
        let mut acc = Self::constant(1.0, self.c.len());
        let mut base = self.clone();
        let mut e = k as u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }
}

impl Add for &Taylor {
    type Output = Taylor;
    fn add(self, o: &Taylor) -> Taylor {
        let n = self.c.len().min(o.c.len());
        Taylor { c: (0..n).map(|k| self.c[k] + o.c[k]).collect() }
    }
}

impl Sub for &Taylor {
    type Output = Taylor;
    fn sub(self, o: &Taylor) -> Taylor {
        let n = self.c.len().min(o.c.len());
        Taylor { c: (0..n).map(|k| self.c[k] - o.c[k]).collect() }
    }
}

impl Mul for &Taylor {
    type Output = Taylor;
    fn mul(self, o: &Taylor) -> Taylor {
        let n = self.c.len().min(o.c.len());
        let mut r = vec![0.0; n];
        for (k, rk) in r.iter_mut().enumerate() {
            let mut s = 0.0;
            for j in 0..=k {
                s += self.c[j] * o.c[k - j];
            }
            *rk = s;
        }
        Taylor { c: r }
    }
}

impl Div for &Taylor {
    type Output = Taylor;
    fn div(self, o: &Taylor) -> Taylor {
        let n = self.c.len().min(o.c.len());
        let b0 = o.c[0];
        let mut q = vec![0.0; n];
        for k in 0..n {
            let mut s = self.c[k];
            for j in 1..=k {
                s -= o.c[j] * q[k - j];
            }
            q[k] = s / b0;
        }
        Taylor { c: q }
    }
}

impl Neg for &Taylor {
    type Output = Taylor;
    fn neg(self) -> Taylor {
        self.scale(-1.0)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Taylor {
            type Output = Taylor;
            fn $m(self, o: Taylor) -> Taylor {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

/// Dot product of two 3-vectors of series.
pub fn dot3(a: &[Taylor; 3], b: &[Taylor; 3]) -> Taylor {
    &(&(&a[0] * &b[0]) + &(&a[1] * &b[1])) + &(&a[2] * &b[2])
}

/// Cross product of two 3-vectors of series.
pub fn cross3(a: &[Taylor; 3], b: &[Taylor; 3]) -> [Taylor; 3] {
    [&(&a[1] * &b[2]) - &(&a[2] * &b[1]), &(&a[2] * &b[0]) - &(&a[0] * &b[2]), &(&a[0] * &b[1]) - &(&a[1] * &b[0])]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn exp_log_round_trip() {
        let x = Taylor::variable(0.3, 12);
        let y = x.exp().ln();
        for (k, c) in y.coeffs().iter().enumerate() {
            let want = match k {
                0 => 0.3,
                1 => 1.0,
                _ => 0.0,
            };
            assert!(close(*c, want, 1e-14), "k={k} c={c}");
        }
    }

    #[test]
    fn sin_derivatives_cycle() {
        let x0 = 0.7_f64;
        let s = Taylor::variable(x0, 8).sin();
        let want = [x0.sin(), x0.cos(), -x0.sin(), -x0.cos(), x0.sin()];
        for (k, w) in want.iter().enumerate() {
            assert!(close(s.derivative_at(k), *w, 1e-13));
        }
    }

    #[test]
    fn tanh_and_sech_match_closed_form_derivatives() {
        let x0 = -0.4_f64;
        let x = Taylor::variable(x0, 4);
        let t = x.tanh();
        let sech2 = 1.0 / x0.cosh().powi(2);
        assert!(close(t.value(), x0.tanh(), 1e-15));
        assert!(close(t.derivative_at(1), sech2, 1e-14));
        assert!(close(t.derivative_at(2), -2.0 * x0.tanh() * sech2, 1e-13));
        let s = x.sech();
        assert!(close(s.derivative_at(1), -x0.tanh() / x0.cosh(), 1e-14));
    }

    #[test]
    fn sqrt_squares_back() {
        let x = Taylor::variable(2.0, 10);
        let a = &(&x * &x) + &Taylor::constant(1.0, 10);
        let r = a.sqrt();
        let back = &r * &r;
        for (p, q) in back.coeffs().iter().zip(a.coeffs()) {
            assert!(close(*p, *q, 1e-14));
        }
    }

    #[test]
    fn division_inverts_multiplication() {
        let x = Taylor::variable(0.5, 9);
        let a = x.cos();
        let b = &x.exp() + &Taylor::constant(1.0, 9);
        let q = &(&a * &b) / &b;
        for (p, r) in q.coeffs().iter().zip(a.coeffs()) {
            assert!(close(*p, *r, 1e-13));
        }
    }

    #[test]
    fn powi_and_eval() {
        let x = Taylor::variable(1.0, 6);
        let p = x.powi(3);
        // (1+s)^3
        assert_eq!(p.coeffs(), &[1.0, 3.0, 3.0, 1.0, 0.0, 0.0]);
        assert!(close(p.eval(0.5), 3.375, 1e-15));
        let inv = x.powi(-2);
        assert!(close(inv.derivative_at(1), -2.0, 1e-14));
    }
}
