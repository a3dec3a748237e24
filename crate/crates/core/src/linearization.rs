//! The change of variables `u_n = x_n / ∏_{k<n} x_k y_k`, `v_n = y_n / ∏_{k<n} x_k y_k`,
//! which turns the cubic system into `(u, v) ↦ A (u, v)` with `(u_0, v_0) = (x_0, y_0)`.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact_arith::{ExactField, QuadScalar, Rational};
use crate::matrix_power::{classify, eigenvalues, expect_case, power, CaseTag, Eigenvalues, SystemParams};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InitialPair {
    pub x0: Rational,
    pub y0: Rational,
}

impl InitialPair {
    pub fn new(x0: Rational, y0: Rational) -> Self {
        Self { x0, y0 }
    }

    pub fn from_ints(x0: i64, y0: i64) -> Self {
        Self::new(Rational::from_integer(x0.into()), Rational::from_integer(y0.into()))
    }

    pub fn swapped(&self) -> Self {
        Self::new(self.y0.clone(), self.x0.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearState {
    pub n: u64,
    pub u: Rational,
    pub v: Rational,
}

impl LinearState {
    pub fn step(&self, p: &SystemParams) -> Self {
        Self {
            n: self.n + 1,
            u: &p.a * &self.u + &p.b * &self.v,
            v: &p.c * &self.u + &p.d * &self.v,
        }
    }

    pub fn has_zero(&self) -> bool {
        self.u.is_zero() || self.v.is_zero()
    }
}

/// `(u_n, v_n) = A^n (x_0, y_0)`.
pub fn linear_orbit(p: &SystemParams, init: &InitialPair, n: u64) -> LinearState {
    let [u, v] = power(p, n).apply(&[init.x0.clone(), init.y0.clone()]);
    LinearState { n, u, v }
}

/// `(u_0, v_0), (u_1, v_1), ...` by stepping the linear recurrence.
pub fn linear_states<'a>(p: &'a SystemParams, init: &InitialPair) -> impl Iterator<Item = LinearState> + 'a {
    let first = LinearState { n: 0, u: init.x0.clone(), v: init.y0.clone() };
    std::iter::successors(Some(first), move |s| Some(s.step(p)))
}

/// `v_n / u_n`, which equals `y_n / x_n` along a nontrivial orbit.
pub fn ratio(p: &SystemParams, init: &InitialPair, n: u64) -> Result<Rational> {
    let s = linear_orbit(p, init, n);
    if s.u.is_zero() {
        return Err(Error::TrivialSolutionEncountered { index: n });
    }
    Ok(s.v / s.u)
}

/// The two ratios a zero-trace orbit alternates between:
/// `y_0 / x_0` at even indices and `(c x_0 + d y_0) / (a x_0 + b y_0)` at odd ones.
pub fn antitrace_ratios(p: &SystemParams, init: &InitialPair) -> Result<(Rational, Rational)> {
    expect_case(p, CaseTag::AntiTraceDistinct)?;
    if init.x0.is_zero() {
        return Err(Error::TrivialSolutionEncountered { index: 0 });
    }
    let u1 = &p.a * &init.x0 + &p.b * &init.y0;
    if u1.is_zero() {
        return Err(Error::TrivialSolutionEncountered { index: 1 });
    }
    let v1 = &p.c * &init.x0 + &p.d * &init.y0;
    Ok((&init.y0 / &init.x0, v1 / u1))
}

/// `u_n = (K1 λ1^n - K2 λ2^n) / (λ1 - λ2)`, `v_n = (K3 λ1^n - K4 λ2^n) / (λ1 - λ2)` with
/// `K1 = (a - λ2) x0 + b y0`, `K2 = (a - λ1) x0 + b y0`,
/// `K3 = c x0 + (d - λ2) y0`, `K4 = c x0 + (d - λ1) y0`.
///
/// Unlike the `(λ - a)`-scaled constants this stays defined for `b = 0` and `λ1 = a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistinctConstants<T> {
    pub k1: T,
    pub k2: T,
    pub k3: T,
    pub k4: T,
    pub lambda1: T,
    pub lambda2: T,
}

impl<T: ExactField> DistinctConstants<T> {
    fn new(p: &SystemParams, init: &InitialPair, lambda1: T, lambda2: T) -> Self {
        let e = |r: &Rational| lambda1.embed(r);
        let (a, b, c, d) = (e(&p.a), e(&p.b), e(&p.c), e(&p.d));
        let (x0, y0) = (e(&init.x0), e(&init.y0));
        let (by0, cx0) = (b.times(&y0), c.times(&x0));
        Self {
            k1: a.minus(&lambda2).times(&x0).plus(&by0),
            k2: a.minus(&lambda1).times(&x0).plus(&by0),
            k3: cx0.plus(&d.minus(&lambda2).times(&y0)),
            k4: cx0.plus(&d.minus(&lambda1).times(&y0)),
            lambda1,
            lambda2,
        }
    }

    /// `(u_n, v_n)` in the eigenvalue field, before any irrational part is dropped.
    pub fn formal_state(&self, n: u64) -> Result<(T, T)> {
        let (l1n, l2n) = (self.lambda1.power(n), self.lambda2.power(n));
        let gap = self.lambda1.minus(&self.lambda2);
        let u = self.k1.times(&l1n).minus(&self.k2.times(&l2n)).divided_by(&gap)?;
        let v = self.k3.times(&l1n).minus(&self.k4.times(&l2n)).divided_by(&gap)?;
        Ok((u, v))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RatioConstants {
    DistinctRational(DistinctConstants<Rational>),
    DistinctQuadratic(DistinctConstants<QuadScalar>),
    /// `v_n / u_n = (c3 + c4 n) / (c1 + c2 n)` for a repeated eigenvalue.
    Repeated { c1: Rational, c2: Rational, c3: Rational, c4: Rational },
}

pub fn ratio_constants(p: &SystemParams, init: &InitialPair) -> Result<RatioConstants> {
    match classify(p) {
        CaseTag::RankDeficient => {
            Err(Error::CaseMismatch { expected: CaseTag::Distinct, found: CaseTag::RankDeficient })
        }
        CaseTag::Repeated => {
            let half = Rational::new(1.into(), 2.into());
            let mu = p.trace() * &half;
            let skew = (&p.a - &p.d) * &half;
            Ok(RatioConstants::Repeated {
                c1: &mu * &init.x0,
                c2: &skew * &init.x0 + &p.b * &init.y0,
                c3: &mu * &init.y0,
                c4: &p.c * &init.x0 - &skew * &init.y0,
            })
        }
        CaseTag::Distinct | CaseTag::AntiTraceDistinct => Ok(match eigenvalues(p).values {
            Eigenvalues::Rational { lambda1, lambda2 } => {
                RatioConstants::DistinctRational(DistinctConstants::new(p, init, lambda1, lambda2))
            }
            Eigenvalues::Quadratic { lambda1, lambda2 } => {
                RatioConstants::DistinctQuadratic(DistinctConstants::new(p, init, lambda1, lambda2))
            }
        }),
    }
}

impl RatioConstants {
    /// `(u_n, v_n)` from the closed form. For the repeated case the common
    /// factor `μ^(n-1)` is kept so the result equals the linear orbit exactly.
    pub fn linear_state(&self, p: &SystemParams, n: u64) -> Result<LinearState> {
        let (u, v) = match self {
            RatioConstants::DistinctRational(k) => k.formal_state(n)?,
            RatioConstants::DistinctQuadratic(k) => {
                let (u, v) = k.formal_state(n)?;
                let real = |x: QuadScalar| x.to_rational().expect("u_n and v_n are rational");
                (real(u), real(v))
            }
            RatioConstants::Repeated { c1, c2, c3, c4 } => {
                let mu = p.trace() / Rational::from_integer(2.into());
                let nr = Rational::from_integer(n.into());
                let scale = if n == 0 { mu.recip() } else { mu.power(n - 1) };
                ((c1 + c2 * &nr) * &scale, (c3 + c4 * &nr) * &scale)
            }
        };
        Ok(LinearState { n, u, v })
    }

    pub fn ratio_at(&self, p: &SystemParams, n: u64) -> Result<Rational> {
        let (num, den) = match self {
            RatioConstants::Repeated { c1, c2, c3, c4 } => {
                let nr = Rational::from_integer(n.into());
                (c3 + c4 * &nr, c1 + c2 * &nr)
            }
            _ => {
                let s = self.linear_state(p, n)?;
                (s.v, s.u)
            }
        };
        if den.is_zero() {
            return Err(Error::TrivialSolutionEncountered { index: n });
        }
        Ok(num / den)
    }
}
