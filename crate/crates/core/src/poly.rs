//! Polynomials used for response functions, radial profiles and
//! user-defined fields.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A univariate polynomial `c0 + c1 t + c2 t² + ...`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Poly1 {
    pub coefficients: Vec<f64>,
}

impl Poly1 {
    pub fn new(coefficients: Vec<f64>) -> Self {
        Self { coefficients }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(|c| *c == 0.0)
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.coefficients
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * t + c)
    }

    pub fn derivative(&self) -> Poly1 {
        Poly1::new(
            self.coefficients
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| k as f64 * c)
                .collect(),
        )
    }

    /// `(t - a)(b - t)`, the simplest profile vanishing at both ends of `[a, b]`.
    pub fn bump(a: f64, b: f64) -> Poly1 {
        Poly1::new(vec![-a * b, a + b, -1.0])
    }

    pub fn scaled(&self, s: f64) -> Poly1 {
        Poly1::new(self.coefficients.iter().map(|c| c * s).collect())
    }
}

#[derive(Debug, Clone, PartialEq)]
struct CompiledTerm {
    coefficient: f64,
    factors: Vec<(usize, i32)>,
}

/// A multivariate polynomial with an explicit coefficient table keyed by
/// exponent multi-index.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, f64>,
    compiled: Vec<CompiledTerm>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
            compiled: Vec::new(),
        }
    }

    pub fn from_terms(
        nvars: usize,
        terms: impl IntoIterator<Item = (Vec<u32>, f64)>,
    ) -> Result<Self> {
        let mut table = BTreeMap::new();
        for (exps, c) in terms {
            if exps.len() != nvars {
                return Err(Error::Input(format!(
                    "monomial {exps:?} has {} exponents, expected {nvars}",
                    exps.len()
                )));
            }
            if !c.is_finite() {
                return Err(Error::Input(format!("non-finite coefficient for {exps:?}")));
            }
            *table.entry(exps).or_insert(0.0) += c;
        }
        let compiled = table
            .iter()
            .map(|(e, &c)| CompiledTerm {
                coefficient: c,
                factors: e
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(j, &k)| (j, k as i32))
                    .collect(),
            })
            .collect();
        Ok(Self {
            nvars,
            terms: table,
            compiled,
        })
    }

    pub fn constant(nvars: usize, c: f64) -> Self {
        Self::from_terms(nvars, [(vec![0; nvars], c)]).expect("well-formed constant")
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, f64> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree (0 for the zero polynomial).
    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    /// Whether the polynomial is independent of variable `j`.
    pub fn independent_of(&self, j: usize) -> bool {
        self.terms.keys().all(|e| e[j] == 0)
    }

    pub fn evaluate(&self, vars: &[f64]) -> f64 {
        debug_assert!(vars.len() >= self.nvars);
        self.compiled
            .iter()
            .map(|t| {
                t.factors
                    .iter()
                    .fold(t.coefficient, |acc, &(j, k)| acc * vars[j].powi(k))
            })
            .sum()
    }

    pub fn derivative(&self, j: usize) -> Polynomial {
        let terms = self.terms.iter().filter(|(e, _)| e[j] > 0).map(|(e, &c)| {
            let mut e2 = e.clone();
            e2[j] -= 1;
            (e2, c * e[j] as f64)
        });
        Polynomial::from_terms(self.nvars, terms).expect("derivative of well-formed polynomial")
    }

    /// `∂p/∂v_j` at `vars` without materializing the derivative.
    pub fn partial(&self, j: usize, vars: &[f64]) -> f64 {
        self.compiled
            .iter()
            .filter_map(|t| {
                let pos = t.factors.iter().position(|&(v, _)| v == j)?;
                let mut acc = t.coefficient * t.factors[pos].1 as f64;
                for (i, &(v, k)) in t.factors.iter().enumerate() {
                    let k = if i == pos { k - 1 } else { k };
                    acc *= vars[v].powi(k);
                }
                Some(acc)
            })
            .sum()
    }

    /// Coefficient table keyed by dotted exponent strings such as `"1.0.2"`.
    pub fn to_table(&self) -> BTreeMap<String, f64> {
        self.terms
            .iter()
            .map(|(e, &c)| (exponent_key(e), c))
            .collect()
    }

    pub fn from_table(nvars: usize, table: &BTreeMap<String, f64>) -> Result<Self> {
        let terms = table
            .iter()
            .map(|(k, &c)| Ok((parse_exponent_key(k)?, c)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_terms(nvars, terms)
    }
}

pub fn exponent_key(e: &[u32]) -> String {
    e.iter().map(u32::to_string).collect::<Vec<_>>().join(".")
}

pub fn parse_exponent_key(key: &str) -> Result<Vec<u32>> {
    key.split('.')
        .map(|s| {
            s.parse::<u32>()
                .map_err(|_| Error::Input(format!("bad exponent key {key:?}")))
        })
        .collect()
}

/// All exponent vectors of `nvars` variables with total degree `<= max_degree`,
/// in lexicographic order.
pub fn monomials(nvars: usize, max_degree: u32) -> Vec<Vec<u32>> {
    fn rec(prefix: &mut Vec<u32>, nvars: usize, left: u32, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == nvars {
            out.push(prefix.clone());
            return;
        }
        for k in 0..=left {
            prefix.push(k);
            rec(prefix, nvars, left - k, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(nvars), nvars, max_degree, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poly1_eval_and_derivative() {
        let f = Poly1::bump(1.0, 2.0);
        assert_eq!(f.eval(1.0), 0.0);
        assert_eq!(f.eval(2.0), 0.0);
        assert_eq!(f.eval(1.5), 0.25);
        assert_eq!(f.derivative().coefficients, vec![3.0, -2.0]);
    }

    #[test]
    fn monomial_count_matches_binomial() {
        // C(n + d, d)
        assert_eq!(monomials(10, 2).len(), 66);
        assert_eq!(monomials(3, 2).len(), 10);
        assert_eq!(monomials(10, 0).len(), 1);
    }

    #[test]
    fn partial_matches_derivative_polynomial() {
        let p = Polynomial::from_terms(
            3,
            [
                (vec![2, 1, 0], 1.5),
                (vec![0, 0, 3], -2.0),
                (vec![1, 0, 0], 0.5),
            ],
        )
        .unwrap();
        let v = [0.7, -1.2, 2.0];
        for j in 0..3 {
            assert!((p.partial(j, &v) - p.derivative(j).evaluate(&v)).abs() < 1e-14);
        }
        assert_eq!(p.degree(), 3);
    }

    #[test]
    fn table_round_trip() {
        let p = Polynomial::from_terms(3, [(vec![2, 1, 0], 1.5), (vec![0, 0, 0], -1.0)]).unwrap();
        let t = p.to_table();
        assert!(t.contains_key("2.1.0"));
        assert_eq!(Polynomial::from_table(3, &t).unwrap(), p);
    }

    #[test]
    fn rejects_wrong_arity() {
        assert!(Polynomial::from_terms(2, [(vec![1, 0, 0], 1.0)]).is_err());
        assert!(parse_exponent_key("1.x").is_err());
    }
}
