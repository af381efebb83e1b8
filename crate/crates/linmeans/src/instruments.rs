//! Instrument construction from leave-own-out subnetworks.
//!
//! For each agent `i`, averaging the rows of the s-step walk matrix
//! `H_i^s` on the leave-own-out subnetwork gives the weights
//!
//! `(Q_s)_{i,j} = (n-1)^{-1} Σ_{i'≠i} (H_i^s)_{i',j}`
//!
//! — the probability of arriving at agent `j` in `s` steps through the
//! subnetwork that excludes `i`, no matter the starting point. The transform
//! `Q_s x` is exogenous under self-selected links and instruments the
//! endogenous peer averages `Hx` and `Hy`.
//!
//! [`q_transform`] computes `Q_s x` without ever forming a matrix power:
//! for each agent it repeatedly applies `H_i` to the covariate vector using
//! neighbor lists and leave-out degrees, which keeps a full instrument pass
//! at `O(s · n · nnz)` per group instead of the `O(n^4)` cost of the dense
//! construction. The dense path survives as [`q_weights_reference`], the
//! test oracle.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::estimator::{GroupData, Model};
use crate::graph::{leave_one_out, leave_out_degree, row_normalize, Graph};

/// Which family of instrument columns to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InstrumentMode {
    /// Leave-own-out walk transforms `Q_s x`; valid under self-selected
    /// links (the TSLS-E estimator).
    LeaveOneOut,
    /// Powers of the row-normalized adjacency, `H^s x`; valid only when the
    /// network is exogenous (the TSLS-X estimator).
    AdjacencyPowers,
}

impl InstrumentMode {
    /// Single-letter code used in interfaces: `E` or `X`.
    pub fn code(&self) -> &'static str {
        match self {
            InstrumentMode::LeaveOneOut => "E",
            InstrumentMode::AdjacencyPowers => "X",
        }
    }

    /// Estimator label, `TSLS-E` or `TSLS-X`.
    pub fn tsls_label(&self) -> &'static str {
        match self {
            InstrumentMode::LeaveOneOut => "TSLS-E",
            InstrumentMode::AdjacencyPowers => "TSLS-X",
        }
    }
}

impl std::fmt::Display for InstrumentMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.code())
    }
}

impl std::str::FromStr for InstrumentMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "E" | "e" => Ok(InstrumentMode::LeaveOneOut),
            "X" | "x" => Ok(InstrumentMode::AdjacencyPowers),
            other => Err(Error::InvalidSpec(format!(
                "unknown instrument mode `{other}` (expected E or X)"
            ))),
        }
    }
}

/// Which instrument columns to build for every group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InstrumentSpec {
    pub mode: InstrumentMode,
    /// Maximum walk depth `S`; columns are built for every step `1..=S`.
    pub max_step: usize,
    /// Append the second-moment columns `x' H_i' H_i^s x`.
    pub include_second_moments: bool,
}

impl InstrumentSpec {
    pub fn new(mode: InstrumentMode, max_step: usize) -> Self {
        Self {
            mode,
            max_step,
            include_second_moments: false,
        }
    }

    /// Number of instrument columns this spec produces.
    pub fn column_count(&self) -> usize {
        let second = match self.mode {
            InstrumentMode::LeaveOneOut if self.include_second_moments => self.max_step,
            _ => 0,
        };
        2 + self.max_step + second
    }

    /// Check that the spec can identify `model`.
    ///
    /// The full model estimates four parameters and its endogenous peer
    /// outcome needs walk depth at least 2, mirroring the use of two-step
    /// neighborhoods as instruments for `Hy`.
    pub fn validate_for(&self, model: Model) -> Result<()> {
        if self.max_step < 1 {
            return Err(Error::InvalidSpec("max_step must be at least 1".into()));
        }
        if model == Model::Full && self.max_step < 2 {
            return Err(Error::InvalidSpec(format!(
                "mode {} with S={} yields {} instrument columns; the full model \
                 needs S >= 2 to instrument the endogenous peer outcome",
                self.mode,
                self.max_step,
                self.column_count()
            )));
        }
        if self.column_count() < model.param_count() {
            return Err(Error::InvalidSpec(format!(
                "{} instrument columns cannot identify {} parameters",
                self.column_count(),
                model.param_count()
            )));
        }
        Ok(())
    }
}

impl Default for InstrumentSpec {
    /// Leave-own-out instruments with walk depth 4: two overidentifying
    /// moments for the full model.
    fn default() -> Self {
        Self::new(InstrumentMode::LeaveOneOut, 4)
    }
}

/// One group's realized instrument matrix `Z_g` with column labels.
#[derive(Debug, Clone)]
pub struct InstrumentMatrix {
    columns: DMatrix<f64>,
    labels: Vec<String>,
}

impl InstrumentMatrix {
    /// `n_g x K` column matrix.
    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.columns
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.columns
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn column_count(&self) -> usize {
        self.columns.ncols()
    }
}

/// Apply one leave-own-out walk step: `next = H_i w`.
fn leave_out_step(g: &Graph, excluded: usize, w: &[f64], next: &mut [f64]) {
    let n = g.len();
    for r in 0..n {
        if r == excluded {
            next[r] = 0.0;
            continue;
        }
        let deg = leave_out_degree(g, r, excluded);
        if deg == 0 {
            next[r] = 0.0;
            continue;
        }
        let mut acc = 0.0;
        for &j in g.neighbors(r) {
            if j != excluded {
                acc += w[j];
            }
        }
        next[r] = acc / deg as f64;
    }
}

/// Dense reference for the instrument weights `Q_s`.
///
/// Forms every `H_i` and its s-th matrix power explicitly. Quartic in the
/// group size; kept as the oracle the fast path is tested against.
pub fn q_weights_reference(g: &Graph, s: usize) -> DMatrix<f64> {
    assert!(s >= 1, "walk depth must be at least 1");
    let n = g.len();
    let mut q = DMatrix::zeros(n, n);
    if n <= 1 {
        return q;
    }
    for i in 0..n {
        let hi = leave_one_out(g, i).expect("index in range").as_matrix().clone();
        let mut power = hi.clone();
        for _ in 1..s {
            power = &power * &hi;
        }
        for j in 0..n {
            let total: f64 = power.column(j).iter().sum();
            q[(i, j)] = total / (n - 1) as f64;
        }
    }
    q
}

/// The instrument transform `Q_s x` without matrix powers.
///
/// Entry `i` is `ι' H_i^s x / (n-1)`: starting from `w = x`, apply the
/// leave-own-out step `s` times, then average. Row `i` of `H_i` is zero, so
/// summing every entry equals the sum over `i' ≠ i`.
pub fn q_transform(g: &Graph, x: &DVector<f64>, s: usize) -> Result<DVector<f64>> {
    assert!(s >= 1, "walk depth must be at least 1");
    let n = g.len();
    if x.len() != n {
        return Err(Error::DimensionMismatch {
            what: "covariate vector",
            got: x.len(),
            expected: n,
        });
    }
    let mut out = DVector::zeros(n);
    if n <= 1 {
        return Ok(out);
    }
    let mut w = vec![0.0; n];
    let mut next = vec![0.0; n];
    for i in 0..n {
        for (slot, value) in w.iter_mut().zip(x.iter()) {
            *slot = *value;
        }
        for _ in 0..s {
            leave_out_step(g, i, &w, &mut next);
            std::mem::swap(&mut w, &mut next);
        }
        out[i] = w.iter().sum::<f64>() / (n - 1) as f64;
    }
    Ok(out)
}

/// Second-moment instrument: entry `i` is `x' H_i' H_i^s x`.
pub fn second_moment_instruments(g: &Graph, x: &DVector<f64>, s: usize) -> Result<DVector<f64>> {
    assert!(s >= 1, "walk depth must be at least 1");
    let n = g.len();
    if x.len() != n {
        return Err(Error::DimensionMismatch {
            what: "covariate vector",
            got: x.len(),
            expected: n,
        });
    }
    let mut out = DVector::zeros(n);
    let mut w = vec![0.0; n];
    let mut next = vec![0.0; n];
    let mut one_step = vec![0.0; n];
    for i in 0..n {
        for (slot, value) in w.iter_mut().zip(x.iter()) {
            *slot = *value;
        }
        leave_out_step(g, i, &w, &mut one_step);
        one_step.clone_into(&mut next);
        std::mem::swap(&mut w, &mut next);
        for _ in 1..s {
            leave_out_step(g, i, &w, &mut next);
            std::mem::swap(&mut w, &mut next);
        }
        out[i] = one_step.iter().zip(&w).map(|(a, b)| a * b).sum();
    }
    Ok(out)
}

/// Assemble one group's instrument matrix `Z_g`.
///
/// Leave-one-out mode produces `(ι, x, Q_1 x, ..., Q_S x)` plus optional
/// second-moment columns; adjacency-power mode produces
/// `(ι, x, Hx, ..., H^S x)`. Column order is fixed as listed.
pub fn build_instrument_matrix(d: &GroupData, spec: &InstrumentSpec) -> Result<InstrumentMatrix> {
    if spec.max_step < 1 {
        return Err(Error::InvalidSpec("max_step must be at least 1".into()));
    }
    let n = d.len();
    let k = spec.column_count();
    let mut columns = DMatrix::zeros(n, k);
    let mut labels = Vec::with_capacity(k);

    columns.column_mut(0).fill(1.0);
    labels.push("const".to_string());
    columns.column_mut(1).copy_from(&d.x);
    labels.push("x".to_string());

    match spec.mode {
        InstrumentMode::LeaveOneOut => {
            for s in 1..=spec.max_step {
                let col = q_transform(&d.graph, &d.x, s)?;
                columns.column_mut(1 + s).copy_from(&col);
                labels.push(format!("Q{s}x"));
            }
            if spec.include_second_moments {
                for s in 1..=spec.max_step {
                    let col = second_moment_instruments(&d.graph, &d.x, s)?;
                    columns.column_mut(1 + spec.max_step + s).copy_from(&col);
                    labels.push(format!("m{s}"));
                }
            }
        }
        InstrumentMode::AdjacencyPowers => {
            let h = row_normalize(&d.graph);
            let mut w = d.x.clone();
            for s in 1..=spec.max_step {
                w = h.apply(&w);
                columns.column_mut(1 + s).copy_from(&w);
                labels.push(if s == 1 {
                    "Hx".to_string()
                } else {
                    format!("H{s}x")
                });
            }
        }
    }

    Ok(InstrumentMatrix { columns, labels })
}
