//! Truncated multivariate formal power series.
//!
//! A series lives over a fixed ordered list of variable names and a fixed
//! truncation degree; coefficients are sparse (exponent vector to nonzero
//! rational). Everything above the truncation degree is discarded.

use super::{ExactError, Rational};
use num::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    vars: Vec<String>,
    max_degree: usize,
    coeffs: BTreeMap<Vec<u32>, Rational>,
}

impl TruncatedSeries {
    /// The zero series over the given variables. Variable names are kept
    /// in the order given; they must be distinct.
    pub fn zero(vars: &[&str], max_degree: usize) -> Self {
        let vars: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        let mut sorted = vars.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), vars.len(), "duplicate series variables");
        TruncatedSeries {
            vars,
            max_degree,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &[&str], max_degree: usize, c: Rational) -> Self {
        let mut s = Self::zero(vars, max_degree);
        s.add_term(&vec![0; s.vars.len()], c);
        s
    }

    pub fn one(vars: &[&str], max_degree: usize) -> Self {
        Self::constant(vars, max_degree, Rational::one())
    }

    /// The series `x_i` for a named variable.
    pub fn variable(vars: &[&str], max_degree: usize, name: &str) -> Self {
        let mut s = Self::zero(vars, max_degree);
        let i = s.var_index(name).expect("unknown series variable");
        if max_degree >= 1 {
            let mut e = vec![0; s.vars.len()];
            e[i] = 1;
            s.add_term(&e, Rational::one());
        }
        s
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn coefficient(&self, expt: &[u32]) -> Rational {
        self.coeffs.get(expt).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&vec![0; self.vars.len()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.coeffs.iter()
    }

    /// Adds `c` to the coefficient of `expt`, discarding terms above the
    /// truncation degree and dropping zeros.
    pub fn add_term(&mut self, expt: &[u32], c: Rational) {
        assert_eq!(expt.len(), self.vars.len());
        let total: u32 = expt.iter().sum();
        if total as usize > self.max_degree || c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(expt.to_vec()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(expt);
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<(), ExactError> {
        if self.vars != other.vars || self.max_degree != other.max_degree {
            return Err(ExactError::VariableMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, ExactError> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (e, c) in &other.coeffs {
            out.add_term(e, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, ExactError> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (e, c) in &other.coeffs {
            out.add_term(e, -c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero_like(self);
        for (e, x) in &self.coeffs {
            out.add_term(e, x * c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    fn zero_like(other: &Self) -> Self {
        TruncatedSeries {
            vars: other.vars.clone(),
            max_degree: other.max_degree,
            coeffs: BTreeMap::new(),
        }
    }

    /// Product with truncation.
    pub fn mul(&self, other: &Self) -> Result<Self, ExactError> {
        self.check_compatible(other)?;
        let mut out = Self::zero_like(self);
        for (ea, ca) in &self.coeffs {
            let da: u32 = ea.iter().sum();
            for (eb, cb) in &other.coeffs {
                let db: u32 = eb.iter().sum();
                if (da + db) as usize > self.max_degree {
                    continue;
                }
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(&e, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, n: usize) -> Result<Self, ExactError> {
        let mut out = Self::one(
            &self.vars.iter().map(|s| s.as_str()).collect::<Vec<_>>(),
            self.max_degree,
        );
        for _ in 0..n {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// Partial derivative with respect to a variable. The result is only
    /// trustworthy to degree `max_degree - 1`; the truncation bound is kept
    /// unchanged so callers must account for that themselves.
    pub fn derivative(&self, name: &str) -> Self {
        let i = self.var_index(name).expect("unknown series variable");
        let mut out = Self::zero_like(self);
        for (e, c) in &self.coeffs {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            out.add_term(&e2, c * Rational::from(num::BigInt::from(e[i])));
        }
        out
    }

    /// exp of a series with zero constant term.
    pub fn exp(&self) -> Result<Self, ExactError> {
        if !self.constant_term().is_zero() {
            return Err(ExactError::NonzeroConstantTerm);
        }
        let vars: Vec<&str> = self.vars.iter().map(|s| s.as_str()).collect();
        let mut out = Self::one(&vars, self.max_degree);
        let mut power = Self::one(&vars, self.max_degree);
        let mut fact = Rational::one();
        for k in 1..=self.max_degree {
            power = power.mul(self)?;
            if power.is_zero() {
                break;
            }
            fact *= Rational::from(num::BigInt::from(k as i64));
            out = out.add(&power.scale(&(Rational::one() / &fact)))?;
        }
        Ok(out)
    }

    /// log of a series with constant term one.
    pub fn log(&self) -> Result<Self, ExactError> {
        if !self.constant_term().is_one() {
            return Err(ExactError::NonzeroConstantTerm);
        }
        let vars: Vec<&str> = self.vars.iter().map(|s| s.as_str()).collect();
        let x = self.sub(&Self::one(&vars, self.max_degree))?;
        let mut out = Self::zero(&vars, self.max_degree);
        let mut power = Self::one(&vars, self.max_degree);
        for k in 1..=self.max_degree {
            power = power.mul(&x)?;
            if power.is_zero() {
                break;
            }
            let sign = if k % 2 == 1 {
                Rational::one()
            } else {
                -Rational::one()
            };
            out = out.add(&power.scale(&(sign / Rational::from(num::BigInt::from(k as i64)))))?;
        }
        Ok(out)
    }

    /// Truncates further, to a smaller degree bound.
    pub fn truncated(&self, degree: usize) -> Self {
        let mut out = self.clone();
        out.max_degree = degree.min(self.max_degree);
        out.coeffs
            .retain(|e, _| e.iter().sum::<u32>() as usize <= degree);
        out
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", c)?;
            for (i, &k) in e.iter().enumerate() {
                if k == 1 {
                    write!(f, "*{}", self.vars[i])?;
                } else if k > 1 {
                    write!(f, "*{}^{}", self.vars[i], k)?;
                }
            }
        }
        Ok(())
    }
}

/// log det of a square matrix of series, via the trace of log(1 + X)
/// about the constant part. The constant matrix must be invertible with
/// determinant one (so that the result has rational coefficients).
pub fn series_log_det(m: &[Vec<TruncatedSeries>]) -> Result<TruncatedSeries, ExactError> {
    let n = m.len();
    assert!(n > 0 && m.iter().all(|row| row.len() == n), "square matrix required");
    let vars: Vec<&str> = m[0][0].vars.iter().map(|s| s.as_str()).collect();
    let deg = m[0][0].max_degree;
    for row in m {
        for entry in row {
            m[0][0].check_compatible(entry)?;
        }
    }

    let mut constant = super::matrix::RationalMatrix::zero(n, n);
    for i in 0..n {
        for j in 0..n {
            constant.set(i, j, m[i][j].constant_term()).unwrap();
        }
    }
    let Some(cinv) = constant.inverse() else {
        return Err(ExactError::SingularConstantTerm);
    };
    if !constant.det().is_one() {
        return Err(ExactError::NonUnitConstantDeterminant);
    }

    // X = C^{-1} M - I has no constant term.
    let mut x = vec![vec![TruncatedSeries::zero(&vars, deg); n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = TruncatedSeries::zero(&vars, deg);
            for k in 0..n {
                acc = acc.add(&m[k][j].scale(&cinv.get(i, k)))?;
            }
            if i == j {
                acc = acc.sub(&TruncatedSeries::one(&vars, deg))?;
            }
            x[i][j] = acc;
        }
    }

    // tr log(1+X) = sum_{k>=1} (-1)^{k+1} tr(X^k)/k.
    let mut out = TruncatedSeries::zero(&vars, deg);
    let mut power = x.clone();
    for k in 1..=deg {
        if k > 1 {
            power = mat_mul(&power, &x)?;
        }
        let mut trace = TruncatedSeries::zero(&vars, deg);
        for (i, row) in power.iter().enumerate() {
            trace = trace.add(&row[i])?;
        }
        if trace.is_zero() && power.iter().flatten().all(|s| s.is_zero()) {
            break;
        }
        let sign = if k % 2 == 1 {
            Rational::one()
        } else {
            -Rational::one()
        };
        out = out.add(&trace.scale(&(sign / Rational::from(num::BigInt::from(k as i64)))))?;
    }
    Ok(out)
}

fn mat_mul(
    a: &[Vec<TruncatedSeries>],
    b: &[Vec<TruncatedSeries>],
) -> Result<Vec<Vec<TruncatedSeries>>, ExactError> {
    let n = a.len();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            let mut acc = TruncatedSeries::zero(
                &a[0][0].vars.iter().map(|s| s.as_str()).collect::<Vec<_>>(),
                a[0][0].max_degree,
            );
            for k in 0..n {
                acc = acc.add(&a[i][k].mul(&b[k][j])?)?;
            }
            row.push(acc);
        }
        out.push(row);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn t(deg: usize) -> TruncatedSeries {
        TruncatedSeries::variable(&["t"], deg, "t")
    }

    #[test]
    fn mul_truncates() {
        let one = TruncatedSeries::one(&["t"], 2);
        let a = one.add(&t(2)).unwrap();
        let b = one.sub(&t(2)).unwrap();
        let mut expect = TruncatedSeries::one(&["t"], 2);
        expect.add_term(&[2], rat(-1, 1));
        assert_eq!(a.mul(&b).unwrap(), expect);

        let tt = t(1).mul(&t(1)).unwrap();
        assert!(tt.is_zero());
    }

    #[test]
    fn exp_inverse_of_exp_neg() {
        // exp(t) * exp(-t) = 1 exactly at truncation degree 5, where both
        // factors are expanded by the defining recurrence of exp.
        let x = t(5);
        let e = x.exp().unwrap();
        let en = x.neg().exp().unwrap();
        assert_eq!(e.mul(&en).unwrap(), TruncatedSeries::one(&["t"], 5));
    }

    #[test]
    fn log_det_of_identity_is_zero() {
        let m = vec![vec![TruncatedSeries::one(&["t"], 3)]];
        assert!(series_log_det(&m).unwrap().is_zero());
    }

    #[test]
    fn log_det_scalar_expansion() {
        let m = vec![vec![TruncatedSeries::one(&["t"], 3).add(&t(3)).unwrap()]];
        let out = series_log_det(&m).unwrap();
        let mut expect = TruncatedSeries::zero(&["t"], 3);
        expect.add_term(&[1], rat(1, 1));
        expect.add_term(&[2], rat(-1, 2));
        expect.add_term(&[3], rat(1, 3));
        assert_eq!(out, expect);
    }

    #[test]
    fn log_det_diagonal_sums_scalar_logs() {
        // diag(1+t, 1-t) at degree 2: log(1+t) + log(1-t) = -t^2.
        let deg = 2;
        let one = TruncatedSeries::one(&["t"], deg);
        let zero = TruncatedSeries::zero(&["t"], deg);
        let m = vec![
            vec![one.add(&t(deg)).unwrap(), zero.clone()],
            vec![zero, one.sub(&t(deg)).unwrap()],
        ];
        let out = series_log_det(&m).unwrap();
        let mut expect = TruncatedSeries::zero(&["t"], deg);
        expect.add_term(&[2], rat(-1, 1));
        assert_eq!(out, expect);
    }

    #[test]
    fn log_det_rejects_singular_constant() {
        let m = vec![vec![t(2)]];
        assert_eq!(
            series_log_det(&m).unwrap_err(),
            ExactError::SingularConstantTerm
        );
    }

    #[test]
    fn derivative_drops_degree() {
        let e = t(4).exp().unwrap();
        let d = e.derivative("t");
        // d/dt exp(t) agrees with exp(t) through degree 3.
        assert_eq!(d.truncated(3), e.truncated(3));
    }
}
