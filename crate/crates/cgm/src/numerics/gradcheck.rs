//! Central-difference verification of reverse-mode gradients.

use std::collections::BTreeMap;

use super::matrix::Matrix;
use crate::error::{CgmError, Result};
use rand::seq::index::sample;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Above this many total entries, a fixed-seed subsample is checked instead
/// of every entry; keeps full-model checks fast.
pub const SUBSAMPLE_THRESHOLD: usize = 10_000;

#[derive(Debug, Clone)]
pub struct GradCheckReport {
    pub max_rel_err: f64,
    pub worst_param: String,
    pub worst_index: (usize, usize),
    pub analytic: f64,
    pub numeric: f64,
    pub entries_checked: usize,
}

/// Compares the reverse-mode gradient of a deterministic loss against
/// central finite differences, entry by entry.
///
/// `f` evaluates the loss at the given parameters and returns the scalar
/// value together with per-parameter gradients. Only the value is consulted
/// at the perturbed points.
pub fn grad_check<F>(
    f: &F,
    params: &BTreeMap<String, Matrix>,
    epsilon: f64,
    seed: u64,
) -> Result<GradCheckReport>
where
    F: Fn(&BTreeMap<String, Matrix>) -> Result<(f64, BTreeMap<String, Matrix>)>,
{
    if !(1e-6..=1e-4).contains(&epsilon) {
        return Err(CgmError::Config(format!(
            "grad_check: epsilon {epsilon:.3e} outside [1e-6, 1e-4]"
        )));
    }
    let (loss0, grads) = f(params)?;
    if !loss0.is_finite() {
        return Err(CgmError::Numerical(format!(
            "grad_check: loss is not finite ({loss0})"
        )));
    }

    // Flatten the global entry index space in name order.
    let mut layout: Vec<(String, usize)> = Vec::new();
    let mut total = 0usize;
    for (name, m) in params {
        layout.push((name.clone(), m.data().len()));
        total += m.data().len();
    }
    let picked: Vec<usize> = if total > SUBSAMPLE_THRESHOLD {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut idx: Vec<usize> = sample(&mut rng, total, SUBSAMPLE_THRESHOLD).into_vec();
        idx.sort_unstable();
        idx
    } else {
        (0..total).collect()
    };

    let mut report = GradCheckReport {
        max_rel_err: 0.0,
        worst_param: String::new(),
        worst_index: (0, 0),
        analytic: 0.0,
        numeric: 0.0,
        entries_checked: picked.len(),
    };

    let mut work = params.clone();
    for global in picked {
        // Locate (param, flat offset) for this global index.
        let mut offset = global;
        let mut name = "";
        for (n, len) in &layout {
            if offset < *len {
                name = n;
                break;
            }
            offset -= len;
        }
        let base = params[name].data()[offset];

        work.get_mut(name).unwrap().data_mut()[offset] = base + epsilon;
        let (lp, _) = f(&work)?;
        work.get_mut(name).unwrap().data_mut()[offset] = base - epsilon;
        let (lm, _) = f(&work)?;
        work.get_mut(name).unwrap().data_mut()[offset] = base;
        if !lp.is_finite() || !lm.is_finite() {
            return Err(CgmError::Numerical(
                "grad_check: perturbed loss is not finite".into(),
            ));
        }

        let numeric = (lp - lm) / (2.0 * epsilon);
        let analytic = grads[name].data()[offset];
        let rel = (analytic - numeric).abs() / analytic.abs().max(numeric.abs()).max(1e-6);
        if rel > report.max_rel_err {
            let cols = params[name].cols();
            report.max_rel_err = rel;
            report.worst_param = name.to_string();
            report.worst_index = (offset / cols, offset % cols);
            report.analytic = analytic;
            report.numeric = numeric;
        }
    }
    Ok(report)
}
