//! Membership in the zero sets: initial pairs whose orbit is eventually
//! `x_n = y_n = 0`.
//!
//! The witness is the least `n` with `u_n = 0` or `v_n = 0`. If `u_w = 0` then
//! `x_w = 0` and `y_{w+1} = 0`; if `v_w = 0` then `y_w = 0` and `x_{w+1} = 0`.
//! Either way every term from `w + 1` on vanishes.

use std::cmp::Ordering;

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_arith::{ExactField, Rational};
use crate::linearization::{ratio_constants, InitialPair, RatioConstants};
use crate::matrix_power::{classify, expect_case, CaseTag, SystemParams};

/// Default number of linear steps scanned when no exact argument applies.
pub const DEFAULT_HORIZON: u64 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MembershipStatus {
    Member,
    NonMember,
    UnknownWithinHorizon,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ZeroSetVerdict {
    pub status: MembershipStatus,
    pub witness: Option<u64>,
    /// Set only for [`MembershipStatus::UnknownWithinHorizon`].
    pub horizon: Option<u64>,
}

impl ZeroSetVerdict {
    pub fn member(witness: u64) -> Self {
        Self { status: MembershipStatus::Member, witness: Some(witness), horizon: None }
    }

    pub fn non_member() -> Self {
        Self { status: MembershipStatus::NonMember, witness: None, horizon: None }
    }

    pub fn unknown(horizon: u64) -> Self {
        Self { status: MembershipStatus::UnknownWithinHorizon, witness: None, horizon: Some(horizon) }
    }

    pub fn is_member(&self) -> bool {
        self.status == MembershipStatus::Member
    }
}

/// Where one coordinate of the linear orbit first vanishes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum RowZero {
    At(u64),
    Never,
    Unknown,
}

fn combine(rows: [RowZero; 2], horizon: u64) -> ZeroSetVerdict {
    let first = rows
        .iter()
        .filter_map(|r| match r {
            RowZero::At(n) => Some(*n),
            _ => None,
        })
        .min();
    match first {
        Some(w) => ZeroSetVerdict::member(w),
        None if rows.iter().all(|r| *r == RowZero::Never) => ZeroSetVerdict::non_member(),
        None => ZeroSetVerdict::unknown(horizon),
    }
}

fn check_params(p: &SystemParams, case: CaseTag) -> Result<()> {
    if p.is_degenerate() {
        return Err(Error::DegenerateParameters);
    }
    expect_case(p, case)
}

fn trivially_zero(init: &InitialPair) -> bool {
    init.x0.is_zero() || init.y0.is_zero()
}

/// `ad - bc = 0`: the orbit is eventually trivial iff `x0 y0 = 0` or
/// `a x0 + b y0 = 0`, except that a nilpotent `A` (`a + d = 0`) sends every
/// pair to zero within two steps.
pub fn z0_member(p: &SystemParams, init: &InitialPair) -> Result<ZeroSetVerdict> {
    check_params(p, CaseTag::RankDeficient)?;
    if trivially_zero(init) {
        return Ok(ZeroSetVerdict::member(0));
    }
    let u1 = &p.a * &init.x0 + &p.b * &init.y0;
    let v1 = &p.c * &init.x0 + &p.d * &init.y0;
    Ok(if u1.is_zero() || v1.is_zero() {
        ZeroSetVerdict::member(1)
    } else if p.trace().is_zero() {
        ZeroSetVerdict::member(2)
    } else {
        ZeroSetVerdict::non_member()
    })
}

/// First `n` with `k1 λ1^n = k2 λ2^n`, i.e. `(λ1/λ2)^n = k2/k1`.
///
/// For real eigenvalues with `a + d ≠ 0`, `|λ1| ≠ |λ2|`, so `|(λ1/λ2)^n|` is
/// strictly monotone and the scan stops as soon as it passes `|k2/k1|`. For
/// complex eigenvalues the ratio lies on the unit circle; if it is a root of
/// unity the zero pattern is periodic, otherwise only a bounded scan is possible.
fn row_zero<T: ExactField>(k1: &T, k2: &T, l1: &T, l2: &T, horizon: u64) -> Result<RowZero> {
    match (k1.is_zero_elem(), k2.is_zero_elem()) {
        (true, true) => return Ok(RowZero::At(0)),
        (true, false) | (false, true) => return Ok(RowZero::Never),
        _ => {}
    }
    let r = l1.divided_by(l2)?;
    let target = k2.divided_by(k1)?;
    let one = r.embed(&Rational::one());
    let scan = |limit: u64| {
        let mut pw = one.clone();
        for n in 0..limit {
            if pw == target {
                return Some(n);
            }
            pw = pw.times(&r);
        }
        None
    };

    match r.cmp_abs(&one) {
        Some(Ordering::Equal) | None => {
            if let Some(period) = (1..=12u64).find(|&k| r.power(k) == one) {
                return Ok(scan(period).map_or(RowZero::Never, RowZero::At));
            }
            Ok(scan(horizon + 1).map_or(RowZero::Unknown, RowZero::At))
        }
        Some(growth) => {
            let mut pw = one;
            let mut n = 0u64;
            loop {
                if pw == target {
                    return Ok(RowZero::At(n));
                }
                if pw.cmp_abs(&target) == Some(growth) {
                    return Ok(RowZero::Never);
                }
                pw = pw.times(&r);
                n += 1;
            }
        }
    }
}

/// `ad - bc ≠ 0`, `(a - d)² + 4bc ≠ 0`, `a + d ≠ 0`.
///
/// Exact for real eigenvalues, rational or not, and for complex eigenvalues
/// whose quotient is a root of unity. Other complex cases are scanned up to
/// `horizon` and reported as unknown if no zero turns up.
pub fn z1_member(p: &SystemParams, init: &InitialPair, horizon: u64) -> Result<ZeroSetVerdict> {
    check_params(p, CaseTag::Distinct)?;
    if trivially_zero(init) {
        return Ok(ZeroSetVerdict::member(0));
    }
    let rows = match ratio_constants(p, init)? {
        RatioConstants::DistinctRational(k) => [
            row_zero(&k.k1, &k.k2, &k.lambda1, &k.lambda2, horizon)?,
            row_zero(&k.k3, &k.k4, &k.lambda1, &k.lambda2, horizon)?,
        ],
        RatioConstants::DistinctQuadratic(k) => [
            row_zero(&k.k1, &k.k2, &k.lambda1, &k.lambda2, horizon)?,
            row_zero(&k.k3, &k.k4, &k.lambda1, &k.lambda2, horizon)?,
        ],
        RatioConstants::Repeated { .. } => unreachable!("case checked above"),
    };
    Ok(combine(rows, horizon))
}

/// The unique `n ≥ 0` solving `constant + slope·n = 0`, if any.
fn linear_root(constant: &Rational, slope: &Rational) -> RowZero {
    if slope.is_zero() {
        return if constant.is_zero() { RowZero::At(0) } else { RowZero::Never };
    }
    let root = -constant / slope;
    if root.is_integer() && !root.is_negative() {
        root.to_integer().to_u64().map_or(RowZero::Never, RowZero::At)
    } else {
        RowZero::Never
    }
}

/// `ad - bc ≠ 0`, `(a - d)² + 4bc = 0`. Both conditions are linear in `n`,
/// so membership is always decided exactly.
pub fn z2_member(p: &SystemParams, init: &InitialPair) -> Result<ZeroSetVerdict> {
    check_params(p, CaseTag::Repeated)?;
    let RatioConstants::Repeated { c1, c2, c3, c4 } = ratio_constants(p, init)? else {
        unreachable!("case checked above")
    };
    Ok(combine([linear_root(&c1, &c2), linear_root(&c3, &c4)], 0))
}

/// `ad - bc ≠ 0`, `(a - d)² + 4bc ≠ 0`, `a + d = 0`: since `A² = (a² + bc) I`
/// only `n = 0` and `n = 1` can produce a zero.
pub fn z3_member(p: &SystemParams, init: &InitialPair) -> Result<ZeroSetVerdict> {
    check_params(p, CaseTag::AntiTraceDistinct)?;
    if trivially_zero(init) {
        return Ok(ZeroSetVerdict::member(0));
    }
    let u1 = &p.a * &init.x0 + &p.b * &init.y0;
    let v1 = &p.c * &init.x0 + &p.d * &init.y0;
    Ok(if u1.is_zero() || v1.is_zero() {
        ZeroSetVerdict::member(1)
    } else {
        ZeroSetVerdict::non_member()
    })
}

pub fn zero_set_member(p: &SystemParams, init: &InitialPair, horizon: u64) -> Result<ZeroSetVerdict> {
    if p.is_degenerate() {
        return Err(Error::DegenerateParameters);
    }
    match classify(p) {
        CaseTag::RankDeficient => z0_member(p, init),
        CaseTag::Repeated => z2_member(p, init),
        CaseTag::Distinct => z1_member(p, init, horizon),
        CaseTag::AntiTraceDistinct => z3_member(p, init),
    }
}
