//! The integer grid with `≈ ε log|Y| / log log|Y|` rich lines in general position.
//!
//! For `N ≥ 2` the ground set is
//!
//! ```text
//! Y = ⋃_{k=0}^{N-1} N^k · (N^N + [0, N^N))
//! ```
//!
//! of size `N^{N+1}`, and the lines are `ℓ_k(x) = N^k x + k N^{N-1}` for
//! `0 < k < εN`. Each `ℓ_b` moves exactly `b·N^N + b·(N^{N-b} - 1)/(N - 1)`
//! points of `Y` outside `Y`, which is at most `2ε|Y|`.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::affine::{general_position_check, AffineMap};
use crate::caps::check_cap;
use crate::error::{ensure, Error, Result};
use crate::grid::{richness_unchecked, GroundSet};
use crate::numeric::{ln_enclosure, ln_int, Enclosure, DEFAULT_BITS};
use crate::scalar::{render_rational, Field, Rational, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FolnerParams {
    n: u32,
    eps: Rational,
}

impl FolnerParams {
    pub fn new(n: u32, eps: Rational) -> Result<FolnerParams> {
        if n < 2 {
            return Err(Error::invalid(format!("N must be at least 2, got {n}")));
        }
        if !(eps.is_positive() && eps < Rational::one()) {
            return Err(Error::invalid(format!(
                "eps must lie in (0, 1), got {}",
                render_rational(&eps)
            )));
        }
        Ok(FolnerParams { n, eps })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn eps(&self) -> &Rational {
        &self.eps
    }

    /// `N^{N+1}`.
    pub fn ground_size(&self) -> BigUint {
        BigUint::from(self.n).pow(self.n + 1)
    }

    /// The indices `k` with `0 < k < εN`.
    pub fn offsets(&self) -> Vec<u32> {
        let bound = &self.eps * Rational::from_integer(BigInt::from(self.n));
        (1..self.n)
            .filter(|&k| Rational::from_integer(BigInt::from(k)) < bound)
            .collect()
    }

    /// With `2ε ≥ 1` the deficiency bound says nothing.
    pub fn bound_is_vacuous(&self) -> bool {
        &self.eps * Rational::from_integer(2.into()) >= Rational::one()
    }
}

/// `ℓ_k(x) = N^k x + k N^{N-1}` over ℚ.
pub fn folner_line(n: u32, k: u32) -> AffineMap {
    let nn = BigInt::from(n);
    let a = nn.pow(k);
    let b = BigInt::from(k) * nn.pow(n - 1);
    AffineMap::new(
        Scalar::from_bigint(a, Field::Rational),
        Scalar::from_bigint(b, Field::Rational),
    )
    .expect("N^k is nonzero")
}

pub fn folner_lines(params: &FolnerParams) -> Result<Vec<AffineMap>> {
    let ks = params.offsets();
    if ks.is_empty() {
        return Err(Error::EmptyFamily);
    }
    Ok(ks.into_iter().map(|k| folner_line(params.n, k)).collect())
}

/// The ground set alone, refusing to materialize more than `cap` elements.
pub fn folner_set(n: u32, cap: u128) -> Result<GroundSet> {
    if n < 2 {
        return Err(Error::invalid(format!("N must be at least 2, got {n}")));
    }
    let size = BigUint::from(n).pow(n + 1);
    check_cap("Folner ground set", size.to_u128().unwrap_or(u128::MAX), cap)?;
    let nn = BigInt::from(n);
    let block = nn.pow(n);
    let block_len = block.to_u64().expect("checked by cap");
    let mut elements = Vec::with_capacity(size.to_usize().expect("checked by cap"));
    for k in 0..n {
        let scale = nn.pow(k);
        let mut v = &scale * &block;
        for _ in 0..block_len {
            elements.push(Scalar::Rational(Rational::from_integer(v.clone())));
            v += &scale;
        }
    }
    GroundSet::new(Field::Rational, elements)
}

#[derive(Clone, Debug)]
pub struct FolnerGrid {
    pub params: FolnerParams,
    pub ground: GroundSet,
    pub lines: Vec<AffineMap>,
    pub warnings: Vec<String>,
}

pub fn folner_grid(params: &FolnerParams, cap: u128) -> Result<FolnerGrid> {
    let lines = folner_lines(params)?;
    let ground = folner_set(params.n, cap)?;
    let mut warnings = Vec::new();
    if params.bound_is_vacuous() {
        warnings.push(format!(
            "2*eps = {} >= 1: the deficiency bound 2*eps*|Y| is vacuous",
            render_rational(&(&params.eps * Rational::from_integer(2.into())))
        ));
    }
    Ok(FolnerGrid {
        params: params.clone(),
        ground,
        lines,
        warnings,
    })
}

/// `b·N^N + b·(N^{N-b} - 1)/(N - 1)` for `0 < b < N`.
pub fn deficiency_closed_form(n: u32, b: u32) -> Result<BigUint> {
    if b == 0 || b >= n {
        return Err(Error::BadIndices(format!("need 0 < b < N, got b={b}, N={n}")));
    }
    let nn = BigUint::from(n);
    let b_big = BigUint::from(b);
    Ok(&b_big * nn.pow(n) + &b_big * (nn.pow(n - b) - 1u32) / (n - 1))
}

/// `(k-i)N^j - (j-i)N^k - (k-j)N^i`, the determinant of
/// `[[1,1,1],[N^i,N^j,N^k],[i,j,k]]`; negative whenever `0 < i < j < k` and `k - i < N`.
pub fn folner_det(i: u32, j: u32, k: u32, n: u32) -> Result<BigInt> {
    if !(0 < i && i < j && j < k) || k - i >= n {
        return Err(Error::BadIndices(format!(
            "need 0 < i < j < k with k - i < N, got ({i}, {j}, {k}), N={n}"
        )));
    }
    let nn = BigInt::from(n);
    let (bi, bj, bk) = (BigInt::from(i), BigInt::from(j), BigInt::from(k));
    Ok((&bk - &bi) * nn.pow(j) - (&bj - &bi) * nn.pow(k) - (&bk - &bj) * nn.pow(i))
}

#[derive(Clone, Debug, Serialize)]
pub struct LineCheck {
    pub k: u32,
    pub a: String,
    pub b: String,
    pub richness: usize,
    pub deficiency: usize,
    pub closed_form: String,
    /// `2ε|Y|` as exact text.
    pub bound: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct FolnerVerification {
    pub n: u32,
    pub eps: String,
    pub ground_size: usize,
    pub lines: Vec<LineCheck>,
    pub general_position: bool,
    pub determinants_negative: bool,
    pub warnings: Vec<String>,
}

/// Measures every line against the grid and asserts the closed form, the
/// `2ε|Y|` deficiency bound and general position.
pub fn verify_folner(grid: &FolnerGrid) -> Result<FolnerVerification> {
    let n = grid.params.n;
    let size = grid.ground.len();
    let ks = grid.params.offsets();
    let richness: Vec<usize> = grid
        .lines
        .par_iter()
        .map(|l| richness_unchecked(l, &grid.ground))
        .collect();
    let bound = &grid.params.eps * Rational::from_integer(BigInt::from(2 * size as u64));
    let mut checks = Vec::with_capacity(ks.len());
    for ((&k, line), &r) in ks.iter().zip(&grid.lines).zip(&richness) {
        let deficiency = size - r;
        let closed = deficiency_closed_form(n, k)?;
        ensure(BigUint::from(deficiency) == closed, || {
            format!("line k={k}: measured deficiency {deficiency} != closed form {closed}")
        })?;
        ensure(Rational::from_integer(BigInt::from(deficiency)) <= bound, || {
            format!("line k={k}: deficiency {deficiency} exceeds 2*eps*|Y|")
        })?;
        checks.push(LineCheck {
            k,
            a: line.slope().render(),
            b: line.offset().render(),
            richness: r,
            deficiency,
            closed_form: closed.to_string(),
            bound: render_rational(&bound),
        });
    }
    let gp = general_position_check(&grid.lines)?.is_empty();
    ensure(gp, || format!("Folner lines for N={n} are not in general position"))?;
    let dets = all_dets_negative(n, &ks)?;
    ensure(dets, || format!("a Folner determinant for N={n} is not negative"))?;
    Ok(FolnerVerification {
        n,
        eps: render_rational(&grid.params.eps),
        ground_size: size,
        lines: checks,
        general_position: gp,
        determinants_negative: dets,
        warnings: grid.warnings.clone(),
    })
}

fn all_dets_negative(n: u32, ks: &[u32]) -> Result<bool> {
    for (x, &i) in ks.iter().enumerate() {
        for (y, &j) in ks.iter().enumerate().skip(x + 1) {
            for &k in &ks[y + 1..] {
                if !folner_det(i, j, k, n)?.is_negative() {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// One row of the line-count rate sweep.
#[derive(Clone, Debug)]
pub struct RateRow {
    pub n: u32,
    pub ground_size: BigUint,
    pub lines: usize,
    /// `|L| / ((1-α)·log|Y| / log log|Y|)`.
    pub ratio: Enclosure,
}

/// `|L|` measured against `(1-α) log|Y| / log log|Y|`; nothing is asserted.
pub fn rate_row(params: &FolnerParams, alpha: &Rational) -> Result<RateRow> {
    if !(alpha.is_positive() && alpha < &Rational::one()) {
        return Err(Error::invalid("alpha must lie in (0, 1)"));
    }
    let lines = params.offsets().len();
    let size = params.ground_size();
    let log_y = ln_int(&size, DEFAULT_BITS);
    let loglog = ln_enclosure(&log_y, DEFAULT_BITS);
    if !loglog.lo.is_positive() {
        return Err(Error::invalid("log log |Y| must be positive"));
    }
    let one_minus = Rational::one() - alpha;
    let denom = log_y.scale(&one_minus).div_pos(&loglog);
    let ratio = if lines == 0 {
        Enclosure::point(Rational::zero())
    } else {
        Enclosure::point(Rational::from_integer(BigInt::from(lines))).div_pos(&denom)
    };
    Ok(RateRow {
        n: params.n,
        ground_size: size,
        lines,
        ratio,
    })
}

impl RateRow {
    pub fn is_zero(&self) -> bool {
        self.ratio.hi.is_zero()
    }
}
