//! Discrete error norms against a reference solution.

/// Origin of the reference values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reference {
    ExactRiemann,
    /// Closed-form smooth solution.
    Analytic,
    StoredReference,
    SelfConverged,
}

/// Per-variable `L1`, `L2` and `L∞` errors, with `L1 = Σ|e| Δx` and `L2 = (Σ e² Δx)^½`.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    pub names: Vec<String>,
    pub l1: Vec<f64>,
    pub l2: Vec<f64>,
    pub linf: Vec<f64>,
    pub reference: Reference,
}

impl ErrorReport {
    /// `computed` and `reference` are per-zone rows of equal width.
    pub fn compute(names: Vec<String>, computed: &[Vec<f64>], reference: &[Vec<f64>], dx: f64, kind: Reference) -> Self {
        let m = names.len();
        let (mut l1, mut l2, mut linf) = (vec![0.0; m], vec![0.0; m], vec![0.0f64; m]);
        for (a, b) in computed.iter().zip(reference) {
            for k in 0..m {
                let e = (a[k] - b[k]).abs();
                l1[k] += e * dx;
                l2[k] += e * e * dx;
                linf[k] = linf[k].max(e);
            }
        }
        Self {
            names,
            l1,
            l2: l2.into_iter().map(f64::sqrt).collect(),
            linf,
            reference: kind,
        }
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn l1_of(&self, name: &str) -> Option<f64> {
        self.index(name).map(|i| self.l1[i])
    }
}
