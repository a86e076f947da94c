//! Small expression trees for analytic curve components.
//!
//! Expressions can be evaluated pointwise or expanded as a Taylor series,
//! which is how curve derivatives of any order are obtained.

use crate::taylor::Taylor;

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Const(f64),
    Var,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
    Sinh(Box<Expr>),
    Cosh(Box<Expr>),
    Tanh(Box<Expr>),
    Sech(Box<Expr>),
    Exp(Box<Expr>),
    Log(Box<Expr>),
    Sqrt(Box<Expr>),
    Powi(Box<Expr>, i32),
}

impl Expr {
    pub fn c(v: f64) -> Self {
        Expr::Const(v)
    }

    pub fn var() -> Self {
        Expr::Var
    }

    pub fn sin(self) -> Self {
        Expr::Sin(Box::new(self))
    }
    pub fn cos(self) -> Self {
        Expr::Cos(Box::new(self))
    }
    pub fn sinh(self) -> Self {
        Expr::Sinh(Box::new(self))
    }
    pub fn cosh(self) -> Self {
        Expr::Cosh(Box::new(self))
    }
    pub fn tanh(self) -> Self {
        Expr::Tanh(Box::new(self))
    }
    pub fn sech(self) -> Self {
        Expr::Sech(Box::new(self))
    }
    pub fn exp(self) -> Self {
        Expr::Exp(Box::new(self))
    }
    pub fn ln(self) -> Self {
        Expr::Log(Box::new(self))
    }
    pub fn sqrt(self) -> Self {
        Expr::Sqrt(Box::new(self))
    }
    pub fn powi(self, k: i32) -> Self {
        Expr::Powi(Box::new(self), k)
    }

    /// Polynomial `sum_k coeffs[k] * t^k`.
    pub fn poly(coeffs: &[f64]) -> Self {
        let mut e = Expr::Const(0.0);
        for &a in coeffs.iter().rev() {
            e = Expr::Const(a) + e * Expr::Var;
        }
        e.simplify()
    }

    /// Trigonometric sum `sum (a_k cos(w_k t) + b_k sin(w_k t))` over `[w, a, b]` triples.
    pub fn trig_sum(terms: &[[f64; 3]]) -> Self {
        let mut e = Expr::Const(0.0);
        for &[w, a, b] in terms {
            let arg = Expr::Const(w) * Expr::Var;
            e = e + Expr::Const(a) * arg.clone().cos() + Expr::Const(b) * arg.sin();
        }
        e.simplify()
    }

    /// Folds additions and multiplications involving literal zeros and ones.
    pub fn simplify(self) -> Self {
        use Expr::*;
        match self {
            Add(a, b) => match (a.simplify(), b.simplify()) {
                (Const(x), e) | (e, Const(x)) if x == 0.0 => e,
                (Const(x), Const(y)) => Const(x + y),
                (a, b) => Add(Box::new(a), Box::new(b)),
            },
            Mul(a, b) => match (a.simplify(), b.simplify()) {
                (Const(x), _) | (_, Const(x)) if x == 0.0 => Const(0.0),
                (Const(x), e) | (e, Const(x)) if x == 1.0 => e,
                (Const(x), Const(y)) => Const(x * y),
                (a, b) => Mul(Box::new(a), Box::new(b)),
            },
            e => e,
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        use Expr::*;
        match self {
            Const(v) => *v,
            Var => t,
            Add(a, b) => a.eval(t) + b.eval(t),
            Sub(a, b) => a.eval(t) - b.eval(t),
            Mul(a, b) => a.eval(t) * b.eval(t),
            Div(a, b) => a.eval(t) / b.eval(t),
            Neg(a) => -a.eval(t),
            Sin(a) => a.eval(t).sin(),
            Cos(a) => a.eval(t).cos(),
            Sinh(a) => a.eval(t).sinh(),
            Cosh(a) => a.eval(t).cosh(),
            Tanh(a) => a.eval(t).tanh(),
            Sech(a) => 1.0 / a.eval(t).cosh(),
            Exp(a) => a.eval(t).exp(),
            Log(a) => a.eval(t).ln(),
            Sqrt(a) => a.eval(t).sqrt(),
            Powi(a, k) => a.eval(t).powi(*k),
        }
    }

    /// Taylor expansion about `t0` with `len` coefficients.
    pub fn jet(&self, t0: f64, len: usize) -> Taylor {
        use Expr::*;
        match self {
            Const(v) => Taylor::constant(*v, len),
            Var => Taylor::variable(t0, len),
            Add(a, b) => &a.jet(t0, len) + &b.jet(t0, len),
            Sub(a, b) => &a.jet(t0, len) - &b.jet(t0, len),
            Mul(a, b) => &a.jet(t0, len) * &b.jet(t0, len),
            Div(a, b) => &a.jet(t0, len) / &b.jet(t0, len),
            Neg(a) => -&a.jet(t0, len),
            Sin(a) => a.jet(t0, len).sin(),
            Cos(a) => a.jet(t0, len).cos(),
            Sinh(a) => a.jet(t0, len).sinh_cosh().0,
            Cosh(a) => a.jet(t0, len).sinh_cosh().1,
            Tanh(a) => a.jet(t0, len).tanh(),
            Sech(a) => a.jet(t0, len).sech(),
            Exp(a) => a.jet(t0, len).exp(),
            Log(a) => a.jet(t0, len).ln(),
            Sqrt(a) => a.jet(t0, len).sqrt(),
            Powi(a, k) => a.jet(t0, len).powi(*k),
        }
    }
}

macro_rules! expr_binop {
    ($tr:ident, $m:ident, $v:ident) => {
        impl std::ops::$tr for Expr {
            type Output = Expr;
            fn $m(self, o: Expr) -> Expr {
                Expr::$v(Box::new(self), Box::new(o))
            }
        }
    };
}
expr_binop!(Add, add, Add);
expr_binop!(Sub, sub, Sub);
expr_binop!(Mul, mul, Mul);
expr_binop!(Div, div, Div);

impl std::ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poly_evaluates_and_differentiates() {
        let p = Expr::poly(&[1.0, -2.0, 0.5]);
        assert_eq!(p.eval(2.0), 1.0 - 4.0 + 2.0);
        let j = p.jet(2.0, 4);
        assert!((j.derivative_at(1) - (-2.0 + 2.0)).abs() < 1e-15);
        assert!((j.derivative_at(2) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn trig_sum_matches_pointwise() {
        let e = Expr::trig_sum(&[[1.0, 0.5, 0.0], [3.0, 0.0, -0.2]]);
        let t: f64 = 0.37;
        let want = 0.5 * t.cos() - 0.2 * (3.0 * t).sin();
        assert!((e.eval(t) - want).abs() < 1e-15);
        let d = e.jet(t, 3).derivative_at(1);
        let dwant = -0.5 * t.sin() - 0.6 * (3.0 * t).cos();
        assert!((d - dwant).abs() < 1e-14);
    }

    #[test]
    fn jet_value_agrees_with_eval() {
        let x = Expr::var();
        let e = (x.clone().sech() * x.clone().cos()) / (Expr::c(2.0) + x.clone().tanh()).sqrt() + x.clone().exp().ln()
            - x.powi(2);
        for &t in &[-0.8, 0.0, 0.3, 1.1] {
            assert!((e.jet(t, 5).value() - e.eval(t)).abs() < 1e-14);
        }
    }
}
