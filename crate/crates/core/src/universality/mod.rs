//! Universality constraints for Cauchy elastic solids with residual stress.
//!
//! A deformation is universal when it can be maintained by boundary tractions
//! alone for every material in the class. Two routes are provided:
//!
//! - the term-wise constraint set (constant invariants, divergence-free
//!   strain and residual-stress fields, homogeneity, admissibility and
//!   triviality of the residual stress), which gives the verdict, and
//! - a randomized cross-check that samples polynomial response functions,
//!   assembles the Cauchy stress and measures its divergence directly.
//!
//! Spatial fields are parameterized by the reference point `X`; their
//! spatial divergence at `x = φ(X)` is obtained by differentiating in `X` and
//! applying the chain rule `∂/∂x^b = (F⁻¹)^C_b ∂/∂X^C`.

mod report;

use std::collections::BTreeSet;

use nalgebra::{Matrix3, Vector3};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub use report::{
    ConstraintEntry, ConstraintReport, Evaluations, Provenance, SeedResidual, Verdict,
};

use crate::charts::{
    divergence_from_partials, CoordinateChart, DivergenceBackend, Point, SampleGrid, Stencil,
    Tensor2, DEFAULT_EXTRAPOLATED_FD_STEP, DEFAULT_FD_STEP,
};
use crate::constitutive::{
    assemble, joint_invariants_spatial, sample_response_set, spatial_generators, InvariantVector,
    ResponseFunctionSet, ResponseMode,
};
use crate::error::{Error, Result};
use crate::kinematics::{
    push_forward_stress, strain_state, DeformationField, MaterialMetricField, StrainState,
};
use crate::residual::{
    check_admissibility, homogeneity_entry, DomainSpec, ResidualStressField, TRACTION_BACKEND,
};
use crate::rng::PRNG_ALGORITHM;

/// Largest fraction of points a check may skip before its result is
/// considered incomplete.
pub const MAX_SKIPPED_FRACTION: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Residuals computed from closed-form derivatives or pointwise values.
    pub analytic: f64,
    /// Residuals computed from finite differences.
    pub finite_difference: f64,
    /// Relative spread of an invariant over the grid.
    pub invariant_spread: f64,
    /// Relative spread of cartesian components; also the absolute bound on
    /// a trivial residual stress.
    pub homogeneity: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            analytic: 1e-8,
            finite_difference: 1e-5,
            invariant_spread: 1e-6,
            homogeneity: 1e-6,
        }
    }
}

impl Tolerances {
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            analytic: self.analytic * factor,
            finite_difference: self.finite_difference * factor,
            invariant_spread: self.invariant_spread * factor,
            homogeneity: self.homogeneity * factor,
        }
    }

    fn validate(&self) -> Result<()> {
        let all = [
            self.analytic,
            self.finite_difference,
            self.invariant_spread,
            self.homogeneity,
        ];
        if all.iter().all(|t| t.is_finite() && *t > 0.0) {
            Ok(())
        } else {
            Err(Error::Config(
                "tolerances must be positive and finite".into(),
            ))
        }
    }
}

/// Which constraint set is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckPath {
    /// Full joint-invariant representation with residual stress.
    #[default]
    ResidualStress,
    /// Simple representation on a material metric induced by an anelastic
    /// distortion, without residual stress.
    Eigenstrain,
}

impl CheckPath {
    pub fn label(self) -> &'static str {
        match self {
            CheckPath::ResidualStress => "residual_stress",
            CheckPath::Eigenstrain => "eigenstrain",
        }
    }

    pub fn response_mode(self) -> ResponseMode {
        match self {
            CheckPath::ResidualStress => ResponseMode::Full,
            CheckPath::Eigenstrain => ResponseMode::Simple,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckGroup {
    InvariantConstancy,
    DivergenceFree,
    Homogeneity,
    Admissibility,
    Triviality,
    SampledEquilibrium,
}

impl CheckGroup {
    pub const ALL: [CheckGroup; 6] = [
        CheckGroup::InvariantConstancy,
        CheckGroup::DivergenceFree,
        CheckGroup::Homogeneity,
        CheckGroup::Admissibility,
        CheckGroup::Triviality,
        CheckGroup::SampledEquilibrium,
    ];

    /// Groups that belong to `path`.
    pub fn applies_to(self, path: CheckPath) -> bool {
        match path {
            CheckPath::ResidualStress => true,
            CheckPath::Eigenstrain => matches!(
                self,
                CheckGroup::InvariantConstancy
                    | CheckGroup::DivergenceFree
                    | CheckGroup::SampledEquilibrium
            ),
        }
    }
}

/// Parameters of the random response functions used by the sampled check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ResponseSampling {
    pub max_degree: u32,
    pub coefficient_bound: f64,
}

impl Default for ResponseSampling {
    fn default() -> Self {
        Self {
            max_degree: 2,
            coefficient_bound: 1.0,
        }
    }
}

/// Everything that controls a universality run besides the fields themselves.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckConfig {
    pub path: CheckPath,
    /// Groups to run; empty means every group of the path.
    #[serde(default)]
    pub groups: Vec<CheckGroup>,
    /// 1-based invariant indices to test for constancy; empty means all
    /// invariants of the path.
    #[serde(default)]
    pub invariants: Vec<usize>,
    #[serde(default)]
    pub tolerances: Tolerances,
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub response: ResponseSampling,
    /// Base finite-difference step; `None` takes the scheme's default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fd_step: Option<f64>,
    #[serde(default)]
    pub fd_scheme: FdScheme,
}

/// Finite-difference rule family used by the grid sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FdScheme {
    SecondOrder,
    #[default]
    Extrapolated,
}

impl FdScheme {
    pub fn default_step(self) -> f64 {
        match self {
            FdScheme::SecondOrder => DEFAULT_FD_STEP,
            FdScheme::Extrapolated => DEFAULT_EXTRAPOLATED_FD_STEP,
        }
    }

    pub fn backend(self, h: f64) -> DivergenceBackend {
        match self {
            FdScheme::SecondOrder => DivergenceBackend::FiniteDifference { h },
            FdScheme::Extrapolated => DivergenceBackend::ExtrapolatedFiniteDifference { h },
        }
    }
}

/// `count` consecutive seeds starting at `base`.
pub fn seed_list(base: u64, count: usize) -> Vec<u64> {
    (0..count as u64).map(|i| base.wrapping_add(i)).collect()
}

impl CheckConfig {
    /// Defaults for `path` with ten material seeds starting at 0.
    pub fn new(path: CheckPath) -> Self {
        Self {
            path,
            groups: Vec::new(),
            invariants: Vec::new(),
            tolerances: Tolerances::default(),
            seeds: seed_list(0, 10),
            response: ResponseSampling::default(),
            fd_step: None,
            fd_scheme: FdScheme::default(),
        }
    }

    pub fn with_seeds(mut self, seeds: Vec<u64>) -> Self {
        self.seeds = seeds;
        self
    }

    pub fn with_groups(mut self, groups: Vec<CheckGroup>) -> Self {
        self.groups = groups;
        self
    }

    pub fn with_tolerances(mut self, tolerances: Tolerances) -> Self {
        self.tolerances = tolerances;
        self
    }

    fn active_groups(&self) -> Result<BTreeSet<CheckGroup>> {
        let groups: BTreeSet<CheckGroup> = if self.groups.is_empty() {
            CheckGroup::ALL
                .into_iter()
                .filter(|g| g.applies_to(self.path))
                .collect()
        } else {
            self.groups.iter().copied().collect()
        };
        if let Some(g) = groups.iter().find(|g| !g.applies_to(self.path)) {
            return Err(Error::Config(format!(
                "check group {g:?} is not part of the {} path",
                self.path.label()
            )));
        }
        Ok(groups)
    }

    fn active_invariants(&self) -> Result<Vec<usize>> {
        let n = self.path.response_mode().argument_count();
        if self.invariants.is_empty() {
            return Ok((1..=n).collect());
        }
        let set: BTreeSet<usize> = self.invariants.iter().copied().collect();
        if set.iter().any(|&k| k == 0 || k > n) {
            return Err(Error::Config(format!(
                "invariant indices must lie in 1..={n} for the {} path",
                self.path.label()
            )));
        }
        Ok(set.into_iter().collect())
    }

    /// The divergence backend the sweeps use.
    pub fn backend(&self) -> DivergenceBackend {
        self.fd_scheme.backend(
            self.fd_step
                .unwrap_or_else(|| self.fd_scheme.default_step()),
        )
    }

    fn validate(&self) -> Result<()> {
        self.tolerances.validate()?;
        let h = self.fd_step.unwrap_or(1.0);
        if !(h.is_finite() && h > 0.0) {
            return Err(Error::Config("fd_step must be positive".into()));
        }
        Ok(())
    }
}

/// The fields and domain under test.
#[derive(Debug, Clone, Copy)]
pub struct Problem<'a> {
    pub deformation: &'a DeformationField,
    pub material_metric: &'a MaterialMetricField,
    pub residual_stress: &'a ResidualStressField,
    pub domain: &'a DomainSpec,
}

impl<'a> Problem<'a> {
    pub fn new(
        deformation: &'a DeformationField,
        material_metric: &'a MaterialMetricField,
        residual_stress: &'a ResidualStressField,
        domain: &'a DomainSpec,
    ) -> Self {
        Self {
            deformation,
            material_metric,
            residual_stress,
            domain,
        }
    }

    fn validate(&self) -> Result<()> {
        let chart = self.domain.chart;
        if self.deformation.reference_chart.kind != chart.kind
            || self.material_metric.chart.kind != chart.kind
        {
            return Err(Error::Config(format!(
                "domain, deformation reference chart and material metric must share a chart \
                 (domain: {}, deformation: {}, metric: {})",
                chart.name(),
                self.deformation.reference_chart.name(),
                self.material_metric.chart.name()
            )));
        }
        Ok(())
    }

    fn fingerprint(&self, config: &CheckConfig) -> String {
        let doc = serde_json::json!({
            "reference_chart": self.deformation.reference_chart,
            "current_chart": self.deformation.current_chart,
            "deformation": self.deformation.family,
            "material_metric": self.material_metric.mode,
            "residual_stress": self.residual_stress.family,
            "domain": self.domain.shape,
            "resolution": self.domain.resolution,
            "config": config,
        });
        hex::encode(Sha256::digest(doc.to_string().as_bytes()))
    }
}

/// Fields at one reference point.
struct Local {
    state: StrainState,
    residual_ref: Matrix3<f64>,
    residual_spatial: Matrix3<f64>,
    invariants: InvariantVector,
    generators: Vec<Matrix3<f64>>,
}

fn local(problem: &Problem, mode: ResponseMode, x_ref: &Point) -> Result<Local> {
    let state = strain_state(problem.deformation, problem.material_metric, x_ref)?;
    let residual_ref = problem
        .residual_stress
        .value_in(&problem.deformation.reference_chart, x_ref)?;
    let residual_spatial = push_forward_stress(&state.f, &residual_ref)?;
    let (invariants, generators) = match mode {
        ResponseMode::Full => (
            joint_invariants_spatial(
                &state.b_sharp.components,
                &residual_spatial,
                &state.spatial_metric,
            )?,
            spatial_generators(&state, &residual_spatial).to_vec(),
        ),
        ResponseMode::Simple => (
            InvariantVector::from_principal(state.principal_invariants()),
            vec![
                state.spatial_metric.raise,
                state.b_sharp.components,
                state.c_sharp.components,
            ],
        ),
    };
    Ok(Local {
        state,
        residual_ref,
        residual_spatial,
        invariants,
        generators,
    })
}

/// `(‖div T‖, ‖T‖)` of one spatial field at one point.
type DivSample = (f64, f64);

struct Divergences {
    b: DivSample,
    c: DivSample,
    residual: DivSample,
    seeds: Vec<DivSample>,
    stencil_points: usize,
}

struct PointSample {
    invariants: InvariantVector,
    b_cart: Matrix3<f64>,
    c_cart: Matrix3<f64>,
    residual_cart: Matrix3<f64>,
    residual_ref_max: f64,
    divergences: Option<Divergences>,
}

struct Sweep {
    points: Vec<PointSample>,
}

fn spatial_divergence(
    center: &Local,
    gamma: &crate::charts::Christoffel,
    stencil: &Stencil,
    values: &[Matrix3<f64>],
) -> DivSample {
    let partials = stencil.apply(values);
    let v: Vector3<f64> =
        divergence_from_partials(gamma, &values[0], &partials, &center.state.f_inv);
    let g = &center.state.spatial_metric;
    (g.vector_norm(&v), g.tensor_norm(&values[0]))
}

fn sweep(
    problem: &Problem,
    grid: &SampleGrid,
    mode: ResponseMode,
    responses: &[ResponseFunctionSet],
    with_divergence: bool,
    fd: DivergenceBackend,
) -> Result<Sweep> {
    let current = problem.deformation.current_chart;
    let reference = problem.deformation.reference_chart;
    let cartesian = CoordinateChart::CARTESIAN;
    let points = grid
        .interior_points
        .par_iter()
        .map(|x_ref| -> Result<PointSample> {
            let center = local(problem, mode, x_ref)?;
            let invariants = center.invariants;
            let x = center.state.current_point;
            let to_cart = |m: &Matrix3<f64>| -> Result<Matrix3<f64>> {
                Ok(current
                    .transform_tensor(&Tensor2::contravariant(*m), &cartesian, &x)?
                    .components)
            };
            let b_cart = to_cart(&center.state.b_sharp.components)?;
            let c_cart = to_cart(&center.state.c_sharp.components)?;
            let residual_cart = to_cart(&center.residual_spatial)?;
            let residual_ref_max = reference
                .transform_tensor(
                    &Tensor2::contravariant(center.residual_ref),
                    &cartesian,
                    x_ref,
                )?
                .components
                .amax();

            let divergences = if with_divergence {
                let stencil = fd
                    .stencil(x_ref, |p| problem.domain.admits(x_ref, p))
                    .expect("finite-difference backend");
                match stencil {
                    Ok(stencil) => {
                        Some(divergences_at(problem, mode, responses, &stencil, center)?)
                    }
                    Err(Error::Stencil { .. }) => None,
                    Err(e) => return Err(e),
                }
            } else {
                None
            };
            Ok(PointSample {
                invariants,
                b_cart,
                c_cart,
                residual_cart,
                residual_ref_max,
                divergences,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Sweep { points })
}

fn divergences_at(
    problem: &Problem,
    mode: ResponseMode,
    responses: &[ResponseFunctionSet],
    stencil: &Stencil,
    center: Local,
) -> Result<Divergences> {
    let mut locals = Vec::with_capacity(stencil.points.len());
    locals.push(center);
    for p in &stencil.points[1..] {
        locals.push(local(problem, mode, p)?);
    }
    let center = &locals[0];
    let gamma = problem
        .deformation
        .current_chart
        .christoffel(&center.state.current_point)?;
    let field = |f: &dyn Fn(&Local) -> Matrix3<f64>| -> DivSample {
        let values: Vec<Matrix3<f64>> = locals.iter().map(f).collect();
        spatial_divergence(center, &gamma, stencil, &values)
    };
    let b = field(&|l| l.state.b_sharp.components);
    let c = field(&|l| l.state.c_sharp.components);
    let residual = field(&|l| l.residual_spatial);
    let mut coeffs = vec![0.0; mode.response_count()];
    let seeds = responses
        .iter()
        .map(|set| {
            let values: Vec<Matrix3<f64>> = locals
                .iter()
                .map(|l| {
                    set.evaluate_into(&l.invariants, &mut coeffs);
                    assemble(&coeffs, &l.generators)
                })
                .collect();
            spatial_divergence(center, &gamma, stencil, &values)
        })
        .collect();
    Ok(Divergences {
        b,
        c,
        residual,
        seeds,
        stencil_points: stencil.points.len(),
    })
}

fn invariant_entries(sweep: &Sweep, which: &[usize], tol: f64) -> Vec<ConstraintEntry> {
    which
        .iter()
        .map(|&k| {
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            let mut mag = 1.0_f64;
            for p in &sweep.points {
                let v = p.invariants.get(k);
                lo = lo.min(v);
                hi = hi.max(v);
                mag = mag.max(v.abs());
            }
            let spread = if sweep.points.is_empty() {
                0.0
            } else {
                hi - lo
            };
            ConstraintEntry::new(
                format!("invariant_constancy.I{k}"),
                spread,
                tol,
                mag,
                TRACTION_BACKEND,
                sweep.points.len(),
            )
        })
        .collect()
}

fn divergence_entry(
    name: &str,
    sweep: &Sweep,
    pick: impl Fn(&Divergences) -> DivSample,
    tol: f64,
    fd: DivergenceBackend,
) -> ConstraintEntry {
    let mut worst = 0.0_f64;
    let mut scale = 1.0_f64;
    let mut evaluated = 0;
    for d in sweep.points.iter().filter_map(|p| p.divergences.as_ref()) {
        let (v, s) = pick(d);
        worst = worst.max(v);
        scale = scale.max(s);
        evaluated += 1;
    }
    ConstraintEntry::new(name, worst, tol, scale, fd.label(), evaluated)
        .with_skipped(sweep.points.len() - evaluated)
}

fn equilibrium_entry(
    sweep: &Sweep,
    seeds: &[u64],
    tol: f64,
    fd: DivergenceBackend,
) -> ConstraintEntry {
    let mut raw = vec![0.0_f64; seeds.len()];
    let mut scale = vec![1.0_f64; seeds.len()];
    let mut evaluated = 0;
    for d in sweep.points.iter().filter_map(|p| p.divergences.as_ref()) {
        for (k, (v, s)) in d.seeds.iter().enumerate() {
            raw[k] = raw[k].max(*v);
            scale[k] = scale[k].max(*s);
        }
        evaluated += 1;
    }
    let per_seed: Vec<SeedResidual> = seeds
        .iter()
        .enumerate()
        .map(|(k, &seed)| {
            let probe = ConstraintEntry::new("", raw[k], tol, scale[k], "", 0);
            SeedResidual {
                seed,
                residual: probe.residual,
                scale: probe.scale,
                passed: probe.passed,
            }
        })
        .collect();
    let worst = per_seed
        .iter()
        .map(|s| s.residual / s.scale)
        .fold(0.0, f64::max);
    let mut entry = ConstraintEntry::new(
        "sampled_equilibrium",
        worst,
        tol,
        1.0,
        fd.label(),
        evaluated,
    )
    .with_skipped(sweep.points.len() - evaluated);
    // A seed failing only through clamping must still fail the entry.
    entry.passed = entry.passed && per_seed.iter().all(|s| s.passed);
    entry.per_seed = per_seed;
    entry
}

/// Coverage messages for entries that skipped more than
/// [`MAX_SKIPPED_FRACTION`] of their points.
pub fn coverage_errors(entries: &[ConstraintEntry]) -> Vec<String> {
    entries
        .iter()
        .filter(|e| {
            let total = e.evaluated_points + e.skipped_points;
            total > 0 && e.skipped_points as f64 > MAX_SKIPPED_FRACTION * total as f64
        })
        .map(|e| {
            Error::Coverage {
                check: e.name.clone(),
                skipped: e.skipped_points,
                total: e.evaluated_points + e.skipped_points,
            }
            .to_string()
        })
        .collect()
}

fn sample_responses(config: &CheckConfig, mode: ResponseMode) -> Result<Vec<ResponseFunctionSet>> {
    config
        .seeds
        .iter()
        .map(|&s| {
            sample_response_set(
                s,
                mode,
                config.response.max_degree,
                config.response.coefficient_bound,
            )
        })
        .collect()
}

fn run(problem: &Problem, config: &CheckConfig) -> Result<ConstraintReport> {
    problem.validate()?;
    config.validate()?;
    let groups = config.active_groups()?;
    let which = config.active_invariants()?;
    if groups.contains(&CheckGroup::SampledEquilibrium) && config.seeds.is_empty() {
        return Err(Error::Config(
            "sampled equilibrium needs at least one seed".into(),
        ));
    }
    let mode = config.path.response_mode();
    let tol = &config.tolerances;
    let h = config.backend();
    let grid = problem.domain.grid()?;
    let responses = if groups.contains(&CheckGroup::SampledEquilibrium) {
        sample_responses(config, mode)?
    } else {
        Vec::new()
    };
    let with_divergence = groups.contains(&CheckGroup::DivergenceFree)
        || groups.contains(&CheckGroup::SampledEquilibrium);
    let sweep = sweep(problem, &grid, mode, &responses, with_divergence, h)?;
    let residual_path = config.path == CheckPath::ResidualStress;

    let mut entries = Vec::new();
    if groups.contains(&CheckGroup::InvariantConstancy) {
        entries.extend(invariant_entries(&sweep, &which, tol.invariant_spread));
    }
    if groups.contains(&CheckGroup::DivergenceFree) {
        let fd = tol.finite_difference;
        entries.push(divergence_entry(
            "divergence_free.b",
            &sweep,
            |d| d.b,
            fd,
            h,
        ));
        entries.push(divergence_entry(
            "divergence_free.c",
            &sweep,
            |d| d.c,
            fd,
            h,
        ));
        if residual_path {
            entries.push(divergence_entry(
                "divergence_free.sigma_residual",
                &sweep,
                |d| d.residual,
                fd,
                h,
            ));
        }
    }
    if groups.contains(&CheckGroup::Homogeneity) {
        let collect = |f: fn(&PointSample) -> Matrix3<f64>| -> Vec<Matrix3<f64>> {
            sweep.points.iter().map(f).collect()
        };
        entries.push(homogeneity_entry(
            "homogeneity.b",
            &collect(|p| p.b_cart),
            tol.homogeneity,
        ));
        entries.push(homogeneity_entry(
            "homogeneity.c",
            &collect(|p| p.c_cart),
            tol.homogeneity,
        ));
        entries.push(homogeneity_entry(
            "homogeneity.sigma_residual",
            &collect(|p| p.residual_cart),
            tol.homogeneity,
        ));
    }
    let mut boundary_evaluations = 0;
    if groups.contains(&CheckGroup::Admissibility) {
        let [div, traction] = check_admissibility(
            problem.residual_stress,
            problem.material_metric,
            problem.domain,
            tol,
            DivergenceBackend::Analytic,
        )?;
        boundary_evaluations = traction.evaluated_points;
        entries.push(div);
        entries.push(traction);
    }
    if groups.contains(&CheckGroup::Triviality) {
        let worst = sweep
            .points
            .iter()
            .map(|p| p.residual_ref_max)
            .fold(0.0, f64::max);
        entries.push(ConstraintEntry::new(
            "triviality.residual_stress",
            worst,
            tol.homogeneity,
            1.0,
            TRACTION_BACKEND,
            sweep.points.len(),
        ));
    }
    if groups.contains(&CheckGroup::SampledEquilibrium) {
        entries.push(equilibrium_entry(
            &sweep,
            &config.seeds,
            tol.finite_difference,
            h,
        ));
    }

    let coverage = coverage_errors(&entries);
    let stencil_evaluations = sweep
        .points
        .iter()
        .map(|p| p.divergences.as_ref().map_or(1, |d| d.stencil_points))
        .sum();
    Ok(ConstraintReport {
        path: config.path.label().to_string(),
        verdict: report::aggregate(&entries, &coverage),
        constraints: entries,
        coverage_errors: coverage,
        provenance: Provenance {
            config_hash: problem.fingerprint(config),
            prng: PRNG_ALGORITHM.to_string(),
            seeds: config.seeds.clone(),
            grid: grid.spacing.clone(),
        },
        evaluations: Evaluations {
            interior_points: grid.interior_points.len(),
            boundary_points: boundary_evaluations,
            stencil_evaluations,
            material_samples: responses.len(),
        },
    })
}

/// Spread of the selected invariants (1-based) over the grid.
pub fn check_invariant_constancy(
    problem: &Problem,
    path: CheckPath,
    which: &[usize],
    tolerances: &Tolerances,
) -> Result<Vec<ConstraintEntry>> {
    let mut config = CheckConfig::new(path)
        .with_groups(vec![CheckGroup::InvariantConstancy])
        .with_tolerances(*tolerances);
    config.invariants = which.to_vec();
    Ok(run(problem, &config)?.constraints)
}

/// Spatial divergence of `b♯`, `c♯` and the pushed-forward residual stress.
pub fn check_divergence_free(
    problem: &Problem,
    tolerances: &Tolerances,
    h: f64,
) -> Result<Vec<ConstraintEntry>> {
    let mut config = CheckConfig::new(CheckPath::ResidualStress)
        .with_groups(vec![CheckGroup::DivergenceFree])
        .with_tolerances(*tolerances);
    config.fd_step = Some(h);
    let report = run(problem, &config)?;
    fail_on_coverage(&report)?;
    Ok(report.constraints)
}

/// Equilibrium of the assembled Cauchy stress for randomly sampled
/// materials, one response set per seed.
pub fn check_equilibrium_sampled(
    problem: &Problem,
    seeds: &[u64],
    mode: ResponseMode,
    response: ResponseSampling,
    tolerances: &Tolerances,
) -> Result<ConstraintEntry> {
    let path = match mode {
        ResponseMode::Full => CheckPath::ResidualStress,
        ResponseMode::Simple => CheckPath::Eigenstrain,
    };
    if path == CheckPath::Eigenstrain && !problem.residual_stress.is_zero() {
        return Err(Error::Config(
            "the simple representation cannot carry a residual stress".into(),
        ));
    }
    let mut config = CheckConfig::new(path)
        .with_groups(vec![CheckGroup::SampledEquilibrium])
        .with_tolerances(*tolerances)
        .with_seeds(seeds.to_vec());
    config.response = response;
    let report = run(problem, &config)?;
    fail_on_coverage(&report)?;
    Ok(report.constraints.into_iter().next().expect("one entry"))
}

fn fail_on_coverage(report: &ConstraintReport) -> Result<()> {
    match report.constraints.iter().find(|e| {
        let total = e.evaluated_points + e.skipped_points;
        e.skipped_points as f64 > MAX_SKIPPED_FRACTION * total as f64
    }) {
        Some(e) => Err(Error::Coverage {
            check: e.name.clone(),
            skipped: e.skipped_points,
            total: e.evaluated_points + e.skipped_points,
        }),
        None => Ok(()),
    }
}

/// Full residual-stress constraint set and the sampled cross-check.
pub fn check_universality(problem: &Problem, config: &CheckConfig) -> Result<ConstraintReport> {
    if config.path != CheckPath::ResidualStress {
        return Err(Error::Config(
            "check_universality runs the residual_stress path".into(),
        ));
    }
    run(problem, config)
}

/// Principal-invariant constraint set on a material metric induced by an
/// anelastic distortion, plus the simple-representation cross-check.
pub fn check_universality_eigenstrain(
    deformation: &DeformationField,
    material_metric: &MaterialMetricField,
    domain: &DomainSpec,
    config: &CheckConfig,
) -> Result<ConstraintReport> {
    if config.path != CheckPath::Eigenstrain {
        return Err(Error::Config(
            "check_universality_eigenstrain runs the eigenstrain path".into(),
        ));
    }
    let zero = ResidualStressField::zero();
    run(
        &Problem::new(deformation, material_metric, &zero, domain),
        config,
    )
}

/// Dispatches on `config.path`. The eigenstrain path rejects a nonzero
/// residual stress.
pub fn check(problem: &Problem, config: &CheckConfig) -> Result<ConstraintReport> {
    match config.path {
        CheckPath::ResidualStress => check_universality(problem, config),
        CheckPath::Eigenstrain => {
            if !problem.residual_stress.is_zero() {
                return Err(Error::Config(
                    "the eigenstrain path takes no residual stress".into(),
                ));
            }
            check_universality_eigenstrain(
                problem.deformation,
                problem.material_metric,
                problem.domain,
                config,
            )
        }
    }
}
