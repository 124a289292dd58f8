//! Exact rational polynomials in the plane order `n`, interpolation of cycle
//! counts, and closed-form bounds on the number of 2k-cycles.

use std::fmt;
use std::io::Read;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolyError {
    #[error("duplicate sample at n = {0}")]
    DuplicateSample(u64),
    #[error("interpolation of degree {degree} needs {expected} samples, got {found}")]
    WrongSampleCount {
        degree: usize,
        expected: usize,
        found: usize,
    },
    #[error("interpolant does not reproduce the sample at n = {0}")]
    NotInterpolating(u64),
    #[error("expected a polynomial of degree {expected}, got degree {found:?}")]
    Degree {
        expected: usize,
        found: Option<usize>,
    },
    #[error("requires n >= k >= 4, got n = {n}, k = {k}")]
    OutOfRange { n: u64, k: usize },
    #[error("vertex count must be even, got {0}")]
    OddVertexCount(u64),
    #[error("residual analysis needs k >= 6, got {0}")]
    KTooSmall(usize),
    #[error("need at least {needed} samples, got {found}")]
    TooFewSamples { needed: usize, found: usize },
    #[error("counts CSV: {0}")]
    Csv(String),
}

/// `x (x-1) ... (x-k+1)`; the empty product for `k = 0`.
pub fn falling_factorial(x: impl Into<BigInt>, k: usize) -> BigInt {
    let x = x.into();
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= &x - BigInt::from(i);
    }
    acc
}

pub fn falling_factorial_rational(x: &BigRational, k: usize) -> BigRational {
    let mut acc = BigRational::one();
    for i in 0..k {
        acc *= x - BigRational::from_integer(BigInt::from(i));
    }
    acc
}

/// `C(n, k)` for nonnegative integers.
pub fn binomial(n: u64, k: usize) -> BigInt {
    if (k as u64) > n {
        return BigInt::zero();
    }
    let mut fact = BigInt::one();
    for i in 1..=k {
        fact *= i;
    }
    falling_factorial(n, k) / fact
}

/// `p/q` in lowest terms with a positive denominator, always with the slash.
pub fn rational_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Number of points (and of lines) of a plane of order `n`.
pub fn plane_size(n: u64) -> u64 {
    n * n + n + 1
}

/// Dense polynomial with exact rational coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalPolynomial {
    coeffs: Vec<BigRational>,
}

impl RationalPolynomial {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RationalPolynomial { coeffs }
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, power: usize) -> BigRational {
        self.coeffs
            .get(power)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_int(&self, x: u64) -> BigRational {
        self.eval(&int(x))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "degree": self.degree(),
            "coefficients": self.coeffs.iter().map(rational_string).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for RationalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            first = false;
            write!(f, "({})", c.abs())?;
            match i {
                0 => {}
                1 => write!(f, " n")?,
                _ => write!(f, " n^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Exact counts indexed by plane order, sorted by `n`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SampleSet {
    samples: Vec<(u64, BigInt)>,
}

impl SampleSet {
    pub fn new(samples: impl IntoIterator<Item = (u64, BigInt)>) -> Result<Self, PolyError> {
        let mut samples: Vec<_> = samples.into_iter().collect();
        samples.sort_by_key(|s| s.0);
        if let Some(w) = samples.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(PolyError::DuplicateSample(w[0].0));
        }
        Ok(SampleSet { samples })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(u64, BigInt)> {
        self.samples.iter()
    }

    pub fn get(&self, n: u64) -> Option<&BigInt> {
        self.samples.iter().find(|s| s.0 == n).map(|s| &s.1)
    }

    /// Splits into the samples at `orders` and the rest.
    pub fn partition(&self, orders: &[u64]) -> (SampleSet, SampleSet) {
        let (a, b) = self
            .samples
            .iter()
            .cloned()
            .partition(|s| orders.contains(&s.0));
        (SampleSet { samples: a }, SampleSet { samples: b })
    }

    /// Reads `n,count` CSV with a header row.
    pub fn from_csv(reader: impl Read) -> Result<Self, PolyError> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(reader);
        let headers = rdr.headers().map_err(|e| PolyError::Csv(e.to_string()))?;
        if headers.len() != 2 || &headers[0] != "n" || &headers[1] != "count" {
            return Err(PolyError::Csv(format!(
                "expected header `n,count`, found `{}`",
                headers.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let mut samples = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| PolyError::Csv(e.to_string()))?;
            let row = i + 2;
            let n: u64 = rec[0]
                .parse()
                .map_err(|_| PolyError::Csv(format!("row {row}: bad n `{}`", &rec[0])))?;
            let count: BigInt = rec[1]
                .parse()
                .map_err(|_| PolyError::Csv(format!("row {row}: bad count `{}`", &rec[1])))?;
            samples.push((n, count));
        }
        Self::new(samples)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,count\n");
        for (n, c) in &self.samples {
            out.push_str(&format!("{n},{c}\n"));
        }
        out
    }
}

/// The unique polynomial of degree at most `degree` through `degree + 1` samples,
/// by Gaussian elimination on the Vandermonde system in exact arithmetic.
pub fn fit_exact(samples: &SampleSet, degree: usize) -> Result<RationalPolynomial, PolyError> {
    let m = degree + 1;
    if samples.len() != m {
        return Err(PolyError::WrongSampleCount {
            degree,
            expected: m,
            found: samples.len(),
        });
    }
    let mut rows: Vec<Vec<BigRational>> = samples
        .iter()
        .map(|(n, c)| {
            let x = int(*n);
            let mut row = Vec::with_capacity(m + 1);
            let mut p = BigRational::one();
            for _ in 0..m {
                row.push(p.clone());
                p *= &x;
            }
            row.push(int(c.clone()));
            row
        })
        .collect();
    for col in 0..m {
        // distinct nodes make the system nonsingular, so a pivot always exists
        let pivot = (col..m)
            .find(|&r| !rows[r][col].is_zero())
            .expect("Vandermonde pivot");
        rows.swap(col, pivot);
        let inv = rows[col][col].recip();
        for v in rows[col].iter_mut() {
            *v *= &inv;
        }
        let prow = rows[col].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == col || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (v, p) in row.iter_mut().zip(&prow) {
                *v -= &f * p;
            }
        }
    }
    let poly = RationalPolynomial::new(rows.into_iter().map(|mut r| r.pop().unwrap()).collect());
    for (n, c) in samples.iter() {
        if poly.eval_int(*n) != int(c.clone()) {
            return Err(PolyError::NotInterpolating(*n));
        }
    }
    Ok(poly)
}

/// Leading four coefficients `a_{2k}, a_{2k-1}, a_{2k-2}, a_{2k-3}` of the
/// 2k-cycle count polynomial, for `k = 3..=10`.
pub const LEADING_COEFFICIENTS: [(usize, [(i64, i64); 4]); 8] = [
    (3, [(1, 6), (1, 3), (1, 3), (1, 6)]),
    (4, [(1, 8), (0, 1), (-1, 8), (-1, 8)]),
    (5, [(1, 10), (0, 1), (0, 1), (-1, 10)]),
    (6, [(1, 12), (0, 1), (-1, 2), (0, 1)]),
    (7, [(1, 14), (0, 1), (-1, 1), (3, 2)]),
    (8, [(1, 16), (0, 1), (-3, 2), (3, 1)]),
    (9, [(1, 18), (0, 1), (-2, 1), (9, 2)]),
    (10, [(1, 20), (0, 1), (-5, 2), (6, 1)]),
];

pub fn expected_leading(k: usize) -> Option<Vec<BigRational>> {
    LEADING_COEFFICIENTS
        .iter()
        .find(|(kk, _)| *kk == k)
        .map(|(_, row)| row.iter().map(|&(p, q)| rational(p, q)).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientCheck {
    /// 1 for the leading coefficient, 2 for the next, and so on.
    pub position: usize,
    pub power: usize,
    pub expected: BigRational,
    pub found: BigRational,
}

impl CoefficientCheck {
    pub fn ok(&self) -> bool {
        self.expected == self.found
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LeadingReport {
    pub k: usize,
    /// True when a tabulated row was used; otherwise only `1/2k` and `0` are checked.
    pub tabulated: bool,
    pub checks: Vec<CoefficientCheck>,
}

impl LeadingReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CoefficientCheck::ok)
    }

    pub fn mismatches(&self) -> impl Iterator<Item = &CoefficientCheck> {
        self.checks.iter().filter(|c| !c.ok())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "k": self.k,
            "tabulated": self.tabulated,
            "passed": self.passed(),
            "checks": self.checks.iter().map(|c| serde_json::json!({
                "position": c.position,
                "power": c.power,
                "expected": rational_string(&c.expected),
                "found": rational_string(&c.found),
                "ok": c.ok(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Compares the leading coefficients of a fitted 2k-cycle polynomial with the
/// tabulated values, or with `1/2k, 0` when `k` is outside the table.
pub fn check_leading_coefficients(
    poly: &RationalPolynomial,
    k: usize,
) -> Result<LeadingReport, PolyError> {
    let d = 2 * k;
    if poly.degree() != Some(d) {
        return Err(PolyError::Degree {
            expected: d,
            found: poly.degree(),
        });
    }
    let (tabulated, expected) = match expected_leading(k) {
        Some(row) => (true, row),
        None => (false, vec![rational(1, d as i64), BigRational::zero()]),
    };
    let checks = expected
        .into_iter()
        .enumerate()
        .map(|(i, expected)| CoefficientCheck {
            position: i + 1,
            power: d - i,
            expected,
            found: poly.coeff(d - i),
        })
        .collect();
    Ok(LeadingReport {
        k,
        tabulated,
        checks,
    })
}

fn require_n_ge_k_ge_4(n: u64, k: usize) -> Result<(), PolyError> {
    if k < 4 || n < k as u64 {
        return Err(PolyError::OutOfRange { n, k });
    }
    Ok(())
}

/// Upper bound on the number of quasi k-gons with exactly `j` distinct lines:
/// `j^{k-j} k_(j) C(N, j) (n-1)^{k-j}`.
pub fn few_lines_bound(n: u64, k: usize, j: usize) -> BigInt {
    let big_n = plane_size(n);
    BigInt::from(j).pow((k - j) as u32)
        * falling_factorial(k as u64, j)
        * binomial(big_n, j)
        * BigInt::from(n - 1).pow((k - j) as u32)
}

/// Number of quasi k-gons on a single line: `N (n+1)_(k)`.
pub fn collinear_count(n: u64, k: usize) -> BigInt {
    BigInt::from(plane_size(n)) * falling_factorial(n + 1, k)
}

/// Explicit lower bound on the number of 2k-cycles of a plane of order `n`:
///
/// `N_(k)/2k - (n-1) N_(k-1)/2 - (k-1)(k-2) N_(k-1)/2k
///   - (N (n+1)_(k) + sum_{j=2}^{k-2} few_lines_bound(n,k,j)) / 2k`.
///
/// Often negative for small `n`, which is valid but uninformative.
pub fn cycle_lower_bound(n: u64, k: usize) -> Result<BigRational, PolyError> {
    require_n_ge_k_ge_4(n, k)?;
    let big_n = plane_size(n);
    let two_k = int(2 * k as u64);
    let nk = int(falling_factorial(big_n, k));
    let nk1 = int(falling_factorial(big_n, k - 1));
    let mut tail = collinear_count(n, k);
    for j in 2..=k - 2 {
        tail += few_lines_bound(n, k, j);
    }
    Ok(&nk / &two_k
        - int(n - 1) * &nk1 / int(2)
        - int(((k - 1) * (k - 2)) as u64) * &nk1 / &two_k
        - int(tail) / &two_k)
}

/// Upper bound `N_(k)/2k - (n-k+2)(k-1) c_{2k-2}` given the exact count of
/// `(2k-2)`-cycles.
pub fn cycle_upper_bound(n: u64, k: usize, c_prev: &BigUint) -> Result<BigRational, PolyError> {
    require_n_ge_k_ge_4(n, k)?;
    let big_n = plane_size(n);
    let nk = int(falling_factorial(big_n, k));
    let factor = int((n + 2 - k as u64) * (k as u64 - 1));
    Ok(nk / int(2 * k as u64) - factor * int(BigInt::from(c_prev.clone())))
}

/// `(v/2)_(k) / 2k`: the most 2k-cycles a C4-free bipartite graph on `v`
/// vertices with equal parts can have. Zero when `v < 2k`.
pub fn square_cap(v: u64, k: usize) -> Result<BigRational, PolyError> {
    if v % 2 == 1 {
        return Err(PolyError::OddVertexCount(v));
    }
    Ok(int(falling_factorial(v / 2, k)) / int(2 * k as u64))
}

/// `n^{2k}/2k - (k-5) n^{2k-2}/2 + 3(k-6) n^{2k-3}/2`.
pub fn conjectured_leading(n: u64, k: usize) -> BigRational {
    let x = int(n);
    let k_r = int(k as u64);
    let pow = |e: usize| num_traits::pow(x.clone(), e);
    pow(2 * k) / int(2 * k as u64) - (&k_r - int(5)) * pow(2 * k - 2) / int(2)
        + int(3) * (&k_r - int(6)) * pow(2 * k - 3) / int(2)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Residual {
    pub n: u64,
    pub count: BigInt,
    pub residual: BigRational,
    /// `residual / n^{2k-4}`.
    pub ratio: BigRational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub k: usize,
    pub residuals: Vec<Residual>,
    /// Whether `|ratio|` never increases as `n` grows across the samples.
    pub abs_ratio_non_increasing: bool,
    pub max_abs_ratio: BigRational,
}

impl ResidualReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "k": self.k,
            "abs_ratio_non_increasing": self.abs_ratio_non_increasing,
            "max_abs_ratio": rational_string(&self.max_abs_ratio),
            "samples": self.residuals.iter().map(|r| serde_json::json!({
                "n": r.n,
                "count": r.count.to_string(),
                "residual": rational_string(&r.residual),
                "ratio": rational_string(&r.ratio),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Residuals of exact counts against the conjectured three-term expansion,
/// scaled by `n^{2k-4}`. Evidence only; no verdict.
pub fn conjecture_residuals(k: usize, samples: &SampleSet) -> Result<ResidualReport, PolyError> {
    if k < 6 {
        return Err(PolyError::KTooSmall(k));
    }
    if samples.len() < 2 {
        return Err(PolyError::TooFewSamples {
            needed: 2,
            found: samples.len(),
        });
    }
    let residuals: Vec<Residual> = samples
        .iter()
        .map(|(n, c)| {
            let residual = int(c.clone()) - conjectured_leading(*n, k);
            let ratio = &residual / num_traits::pow(int(*n), 2 * k - 4);
            Residual {
                n: *n,
                count: c.clone(),
                residual,
                ratio,
            }
        })
        .collect();
    let abs: Vec<BigRational> = residuals.iter().map(|r| r.ratio.abs()).collect();
    let abs_ratio_non_increasing = abs.windows(2).all(|w| w[1] <= w[0]);
    let max_abs_ratio = abs.iter().max().cloned().unwrap_or_else(BigRational::zero);
    Ok(ResidualReport {
        k,
        residuals,
        abs_ratio_non_increasing,
        max_abs_ratio,
    })
}

/// Whether `2k` divides `x`.
pub fn divisible_by_2k(x: &BigUint, k: usize) -> bool {
    x.is_multiple_of(&BigUint::from(2 * k))
}
