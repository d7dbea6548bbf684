use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::InvariantVector;
use crate::error::{Error, Result};
use crate::poly::{monomials, Polynomial};
use crate::rng::SeededRng;

/// Number of invariant arguments every response polynomial is written in.
pub const INVARIANT_COUNT: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResponseMode {
    /// `(α, β, γ)` of `(I₁, I₂, I₃)`: `σ = α g♯ + β b♯ + γ c♯`.
    Simple,
    /// `α₀..α₇` of `I₁..I₁₀`, one per generator.
    Full,
}

impl ResponseMode {
    pub fn label(self) -> &'static str {
        match self {
            ResponseMode::Simple => "simple",
            ResponseMode::Full => "full",
        }
    }

    pub fn response_count(self) -> usize {
        match self {
            ResponseMode::Simple => 3,
            ResponseMode::Full => 8,
        }
    }

    /// Invariants a response in this mode may depend on.
    pub fn argument_count(self) -> usize {
        match self {
            ResponseMode::Simple => 3,
            ResponseMode::Full => 10,
        }
    }
}

/// Polynomial response functions of the joint invariants.
#[derive(Debug, Clone, PartialEq)]
pub struct ResponseFunctionSet {
    mode: ResponseMode,
    max_degree: u32,
    responses: Vec<Polynomial>,
}

impl ResponseFunctionSet {
    pub fn new(mode: ResponseMode, max_degree: u32, responses: Vec<Polynomial>) -> Result<Self> {
        if responses.len() != mode.response_count() {
            return Err(Error::Input(format!(
                "{} mode needs {} responses, got {}",
                mode.label(),
                mode.response_count(),
                responses.len()
            )));
        }
        for (i, p) in responses.iter().enumerate() {
            if p.nvars() != INVARIANT_COUNT {
                return Err(Error::Input(format!(
                    "response {i} has {} variables",
                    p.nvars()
                )));
            }
            if p.degree() > max_degree {
                return Err(Error::Input(format!(
                    "response {i} has degree {} > {max_degree}",
                    p.degree()
                )));
            }
            if (mode.argument_count()..INVARIANT_COUNT).any(|j| !p.independent_of(j)) {
                return Err(Error::Input(format!(
                    "simple-mode response {i} depends on I4..I10"
                )));
            }
        }
        Ok(Self {
            mode,
            max_degree,
            responses,
        })
    }

    /// Degree-0 set with the given constant responses.
    pub fn constant(mode: ResponseMode, values: &[f64]) -> Result<Self> {
        let polys = values
            .iter()
            .map(|&c| Polynomial::constant(INVARIANT_COUNT, c))
            .collect();
        Self::new(mode, 0, polys)
    }

    pub fn mode(&self) -> ResponseMode {
        self.mode
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn responses(&self) -> &[Polynomial] {
        &self.responses
    }

    pub(crate) fn require(&self, mode: ResponseMode) -> Result<()> {
        if self.mode == mode {
            Ok(())
        } else {
            Err(Error::Mode {
                expected: mode.label(),
                found: self.mode.label(),
            })
        }
    }

    /// Every response evaluated at `inv`, written into `out`.
    pub fn evaluate_into(&self, inv: &InvariantVector, out: &mut [f64]) {
        for (o, p) in out.iter_mut().zip(&self.responses) {
            *o = p.evaluate(&inv.0);
        }
    }

    pub fn evaluate(&self, inv: &InvariantVector) -> Vec<f64> {
        let mut out = vec![0.0; self.responses.len()];
        self.evaluate_into(inv, &mut out);
        out
    }

    /// `∂(response i)/∂I_{j+1}` at `inv` (`j` zero-based).
    pub fn partial_derivative(&self, i: usize, j: usize, inv: &InvariantVector) -> f64 {
        self.responses[i].partial(j, &inv.0)
    }

    pub fn to_document(&self) -> ResponseSetDocument {
        ResponseSetDocument {
            mode: self.mode,
            max_degree: self.max_degree,
            responses: self.responses.iter().map(Polynomial::to_table).collect(),
        }
    }

    pub fn from_document(doc: &ResponseSetDocument) -> Result<Self> {
        let polys = doc
            .responses
            .iter()
            .map(|t| Polynomial::from_table(INVARIANT_COUNT, t))
            .collect::<Result<Vec<_>>>()?;
        Self::new(doc.mode, doc.max_degree, polys)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("response set serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: ResponseSetDocument =
            serde_json::from_str(s).map_err(|e| Error::Input(e.to_string()))?;
        Self::from_document(&doc)
    }
}

/// Serialized form: one coefficient table per response, keyed by
/// `"d1.d2.d3.d4.d5.d6.d7.d8.d9.d10"` exponent strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResponseSetDocument {
    pub mode: ResponseMode,
    pub max_degree: u32,
    pub responses: Vec<BTreeMap<String, f64>>,
}

/// A random response set: every monomial of total degree `<= max_degree` in
/// the mode's arguments gets a coefficient uniform in `[-bound, bound]`.
pub fn sample_response_set(
    seed: u64,
    mode: ResponseMode,
    max_degree: u32,
    coefficient_bound: f64,
) -> Result<ResponseFunctionSet> {
    if max_degree < 1 {
        return Err(Error::Input("max_degree must be at least 1".into()));
    }
    if !(coefficient_bound > 0.0 && coefficient_bound.is_finite()) {
        return Err(Error::Input("coefficient_bound must be positive".into()));
    }
    let mut rng = SeededRng::new(seed);
    let basis = monomials(mode.argument_count(), max_degree);
    let polys = (0..mode.response_count())
        .map(|_| {
            let terms = basis.iter().map(|e| {
                let mut full = e.clone();
                full.resize(INVARIANT_COUNT, 0);
                (full, rng.range(-coefficient_bound, coefficient_bound))
            });
            Polynomial::from_terms(INVARIANT_COUNT, terms)
        })
        .collect::<Result<Vec<_>>>()?;
    ResponseFunctionSet::new(mode, max_degree, polys)
}
