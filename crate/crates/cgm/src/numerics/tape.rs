//! Tape-based reverse-mode differentiation over matrix values.
//!
//! A tape is rebuilt for every training step: recording is append-only, so
//! reverse index order is a valid topological order for the backward pass.
//! Repeated subexpressions accumulate their gradients additively. A tape and
//! its nodes are confined to a single thread; independent tapes may run in
//! parallel.

use std::cell::RefCell;
use std::collections::BTreeMap;

use super::matrix::{sigmoid, Matrix};
use crate::error::{CgmError, Result};

enum Op {
    Leaf,
    Matmul(usize, usize),
    Add(usize, usize),
    Sub(usize, usize),
    Hadamard(usize, usize),
    Sigmoid(usize),
    Tanh(usize),
    Relu(usize),
    Scale(usize, f64),
    /// Adds a 1xC bias row to every row of an SxC matrix.
    AddRowBroadcast(usize, usize),
    ConcatCols(Vec<usize>),
    ConcatRows(Vec<usize>),
    SelectRows(usize, Vec<usize>),
    Transpose(usize),
    /// Row-wise softmax.
    Softmax(usize),
    /// Mean negative log-likelihood over the labeled rows of a probability matrix.
    MaskedNll { probs: usize, labels: Vec<Option<usize>> },
    /// Mean squared error over masked rows of an Sx1 prediction column.
    MaskedMse { pred: usize, targets: Vec<f64>, mask: Vec<bool> },
    /// Scalar node whose input gradients were computed in closed form at
    /// forward time (used by the canonical-correlation loss).
    Custom { parents: Vec<usize>, parent_grads: Vec<Matrix> },
}

struct Node {
    value: Matrix,
    op: Op,
}

#[derive(Default)]
pub struct Tape {
    nodes: RefCell<Vec<Node>>,
    params: RefCell<Vec<(usize, String)>>,
}

/// Handle to a tape node. Cheap to copy; shape is cached for dim checks.
#[derive(Clone, Copy)]
pub struct Var<'t> {
    tape: &'t Tape,
    idx: usize,
    rows: usize,
    cols: usize,
}

impl Tape {
    pub fn new() -> Self {
        Tape::default()
    }

    pub fn len(&self) -> usize {
        self.nodes.borrow().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn push(&self, value: Matrix, op: Op) -> Var<'_> {
        let (rows, cols) = value.shape();
        let mut nodes = self.nodes.borrow_mut();
        nodes.push(Node { value, op });
        Var { tape: self, idx: nodes.len() - 1, rows, cols }
    }

    /// Non-trainable input (data, adjacency, constants).
    pub fn constant(&self, value: Matrix) -> Var<'_> {
        self.push(value, Op::Leaf)
    }

    /// Trainable leaf; its gradient is collected under `name`.
    pub fn param(&self, name: &str, value: Matrix) -> Var<'_> {
        let v = self.push(value, Op::Leaf);
        self.params.borrow_mut().push((v.idx, name.to_string()));
        v
    }

    fn value_of(&self, idx: usize) -> Matrix {
        self.nodes.borrow()[idx].value.clone()
    }

    /// Reverse pass from a 1x1 scalar node. Returns per-parameter gradients
    /// (zero matrices for parameters the loss does not reach).
    pub fn backward(&self, loss: Var<'_>) -> Result<BTreeMap<String, Matrix>> {
        if loss.rows != 1 || loss.cols != 1 {
            return Err(CgmError::Dimension(format!(
                "backward: loss node is {}x{}, must be 1x1",
                loss.rows, loss.cols
            )));
        }
        let nodes = self.nodes.borrow();
        let mut grads: Vec<Option<Matrix>> = vec![None; nodes.len()];
        grads[loss.idx] = Some(Matrix::from_vec(1, 1, vec![1.0])?);

        for idx in (0..=loss.idx).rev() {
            let g = match grads[idx].take() {
                Some(g) => g,
                None => continue,
            };
            let node = &nodes[idx];
            match &node.op {
                Op::Leaf => {
                    grads[idx] = Some(g);
                    continue;
                }
                Op::Matmul(a, b) => {
                    let ga = g.matmul_nt(&nodes[*b].value)?;
                    let gb = nodes[*a].value.matmul_tn(&g)?;
                    accumulate(&mut grads, *a, ga);
                    accumulate(&mut grads, *b, gb);
                }
                Op::Add(a, b) => {
                    accumulate(&mut grads, *a, g.clone());
                    accumulate(&mut grads, *b, g);
                }
                Op::Sub(a, b) => {
                    accumulate(&mut grads, *b, g.scale(-1.0));
                    accumulate(&mut grads, *a, g);
                }
                Op::Hadamard(a, b) => {
                    let ga = g.hadamard(&nodes[*b].value)?;
                    let gb = g.hadamard(&nodes[*a].value)?;
                    accumulate(&mut grads, *a, ga);
                    accumulate(&mut grads, *b, gb);
                }
                Op::Sigmoid(a) => {
                    let y = &node.value;
                    let ga = Matrix::from_fn(y.rows(), y.cols(), |i, j| {
                        let s = y.get(i, j);
                        g.get(i, j) * s * (1.0 - s)
                    });
                    accumulate(&mut grads, *a, ga);
                }
                Op::Tanh(a) => {
                    let y = &node.value;
                    let ga = Matrix::from_fn(y.rows(), y.cols(), |i, j| {
                        let t = y.get(i, j);
                        g.get(i, j) * (1.0 - t * t)
                    });
                    accumulate(&mut grads, *a, ga);
                }
                Op::Relu(a) => {
                    let y = &node.value;
                    let ga = Matrix::from_fn(y.rows(), y.cols(), |i, j| {
                        if y.get(i, j) > 0.0 {
                            g.get(i, j)
                        } else {
                            0.0
                        }
                    });
                    accumulate(&mut grads, *a, ga);
                }
                Op::Scale(a, c) => {
                    accumulate(&mut grads, *a, g.scale(*c));
                }
                Op::AddRowBroadcast(a, bias) => {
                    let mut gb = Matrix::zeros(1, g.cols());
                    for i in 0..g.rows() {
                        for j in 0..g.cols() {
                            gb.set(0, j, gb.get(0, j) + g.get(i, j));
                        }
                    }
                    accumulate(&mut grads, *a, g);
                    accumulate(&mut grads, *bias, gb);
                }
                Op::ConcatCols(parts) => {
                    let mut off = 0;
                    for &p in parts {
                        let pc = nodes[p].value.cols();
                        let gp = Matrix::from_fn(g.rows(), pc, |i, j| g.get(i, off + j));
                        accumulate(&mut grads, p, gp);
                        off += pc;
                    }
                }
                Op::ConcatRows(parts) => {
                    let mut off = 0;
                    for &p in parts {
                        let pr = nodes[p].value.rows();
                        let gp = Matrix::from_fn(pr, g.cols(), |i, j| g.get(off + i, j));
                        accumulate(&mut grads, p, gp);
                        off += pr;
                    }
                }
                Op::SelectRows(a, indices) => {
                    let src = &nodes[*a].value;
                    let mut ga = Matrix::zeros(src.rows(), src.cols());
                    for (k, &i) in indices.iter().enumerate() {
                        for j in 0..g.cols() {
                            ga.set(i, j, ga.get(i, j) + g.get(k, j));
                        }
                    }
                    accumulate(&mut grads, *a, ga);
                }
                Op::Transpose(a) => {
                    accumulate(&mut grads, *a, g.transpose());
                }
                Op::Softmax(a) => {
                    let y = &node.value;
                    let mut ga = Matrix::zeros(y.rows(), y.cols());
                    for i in 0..y.rows() {
                        let dot: f64 =
                            (0..y.cols()).map(|j| g.get(i, j) * y.get(i, j)).sum();
                        for j in 0..y.cols() {
                            ga.set(i, j, y.get(i, j) * (g.get(i, j) - dot));
                        }
                    }
                    accumulate(&mut grads, *a, ga);
                }
                Op::MaskedNll { probs, labels } => {
                    let gs = g.get(0, 0);
                    let p = &nodes[*probs].value;
                    let count = labels.iter().flatten().count().max(1) as f64;
                    let mut gp = Matrix::zeros(p.rows(), p.cols());
                    for (i, label) in labels.iter().enumerate() {
                        if let Some(c) = label {
                            let pv = p.get(i, *c).max(1e-300);
                            gp.set(i, *c, -gs / (count * pv));
                        }
                    }
                    accumulate(&mut grads, *probs, gp);
                }
                Op::MaskedMse { pred, targets, mask } => {
                    let gs = g.get(0, 0);
                    let p = &nodes[*pred].value;
                    let count = mask.iter().filter(|m| **m).count().max(1) as f64;
                    let mut gp = Matrix::zeros(p.rows(), 1);
                    for i in 0..p.rows() {
                        if mask[i] {
                            gp.set(i, 0, gs * 2.0 * (p.get(i, 0) - targets[i]) / count);
                        }
                    }
                    accumulate(&mut grads, *pred, gp);
                }
                Op::Custom { parents, parent_grads } => {
                    let gs = g.get(0, 0);
                    for (p, pg) in parents.iter().zip(parent_grads) {
                        accumulate(&mut grads, *p, pg.scale(gs));
                    }
                }
            }
        }

        let mut out = BTreeMap::new();
        for (idx, name) in self.params.borrow().iter() {
            let g = match &grads[*idx] {
                Some(g) => g.clone(),
                None => {
                    let v = &nodes[*idx].value;
                    Matrix::zeros(v.rows(), v.cols())
                }
            };
            out.insert(name.clone(), g);
        }
        Ok(out)
    }
}

fn accumulate(grads: &mut [Option<Matrix>], idx: usize, g: Matrix) {
    match &mut grads[idx] {
        Some(existing) => existing.axpy(1.0, &g),
        slot @ None => *slot = Some(g),
    }
}

impl<'t> Var<'t> {
    pub fn tape(&self) -> &'t Tape {
        self.tape
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn value(&self) -> Matrix {
        self.tape.value_of(self.idx)
    }

    pub fn scalar(&self) -> f64 {
        debug_assert!(self.rows == 1 && self.cols == 1);
        self.tape.nodes.borrow()[self.idx].value.get(0, 0)
    }

    pub fn matmul(&self, other: Var<'t>) -> Result<Var<'t>> {
        let v = {
            let nodes = self.tape.nodes.borrow();
            nodes[self.idx].value.matmul(&nodes[other.idx].value)?
        };
        Ok(self.tape.push(v, Op::Matmul(self.idx, other.idx)))
    }

    pub fn add(&self, other: Var<'t>) -> Result<Var<'t>> {
        let v = {
            let nodes = self.tape.nodes.borrow();
            nodes[self.idx].value.add(&nodes[other.idx].value)?
        };
        Ok(self.tape.push(v, Op::Add(self.idx, other.idx)))
    }

    pub fn sub(&self, other: Var<'t>) -> Result<Var<'t>> {
        let v = {
            let nodes = self.tape.nodes.borrow();
            nodes[self.idx].value.sub(&nodes[other.idx].value)?
        };
        Ok(self.tape.push(v, Op::Sub(self.idx, other.idx)))
    }

    pub fn hadamard(&self, other: Var<'t>) -> Result<Var<'t>> {
        let v = {
            let nodes = self.tape.nodes.borrow();
            nodes[self.idx].value.hadamard(&nodes[other.idx].value)?
        };
        Ok(self.tape.push(v, Op::Hadamard(self.idx, other.idx)))
    }

    pub fn sigmoid(&self) -> Var<'t> {
        let v = self.value().map(sigmoid);
        self.tape.push(v, Op::Sigmoid(self.idx))
    }

    pub fn tanh(&self) -> Var<'t> {
        let v = self.value().map(f64::tanh);
        self.tape.push(v, Op::Tanh(self.idx))
    }

    pub fn relu(&self) -> Var<'t> {
        let v = self.value().map(|x| x.max(0.0));
        self.tape.push(v, Op::Relu(self.idx))
    }

    pub fn scale(&self, c: f64) -> Var<'t> {
        let v = self.value().scale(c);
        self.tape.push(v, Op::Scale(self.idx, c))
    }

    /// Adds a 1xC bias to every row.
    pub fn add_row_broadcast(&self, bias: Var<'t>) -> Result<Var<'t>> {
        if bias.rows != 1 || bias.cols != self.cols {
            return Err(CgmError::Dimension(format!(
                "add_row_broadcast: value is {}x{}, bias is {}x{}",
                self.rows, self.cols, bias.rows, bias.cols
            )));
        }
        let v = {
            let nodes = self.tape.nodes.borrow();
            let a = &nodes[self.idx].value;
            let b = &nodes[bias.idx].value;
            Matrix::from_fn(a.rows(), a.cols(), |i, j| a.get(i, j) + b.get(0, j))
        };
        Ok(self.tape.push(v, Op::AddRowBroadcast(self.idx, bias.idx)))
    }

    pub fn transpose(&self) -> Var<'t> {
        let v = self.value().transpose();
        self.tape.push(v, Op::Transpose(self.idx))
    }

    pub fn select_rows(&self, indices: &[usize]) -> Result<Var<'t>> {
        for &i in indices {
            if i >= self.rows {
                return Err(CgmError::Dimension(format!(
                    "select_rows: index {i} out of range for {} rows",
                    self.rows
                )));
            }
        }
        let v = self.value().select_rows(indices);
        Ok(self
            .tape
            .push(v, Op::SelectRows(self.idx, indices.to_vec())))
    }

    /// Row-wise softmax with max subtraction.
    pub fn softmax(&self) -> Var<'t> {
        let x = self.value();
        let mut y = Matrix::zeros(x.rows(), x.cols());
        for i in 0..x.rows() {
            let row = x.row(i);
            let m = row.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let exps: Vec<f64> = row.iter().map(|v| (v - m).exp()).collect();
            let sum: f64 = exps.iter().sum();
            for (j, e) in exps.iter().enumerate() {
                y.set(i, j, e / sum);
            }
        }
        self.tape.push(y, Op::Softmax(self.idx))
    }

    /// Mean cross-entropy over rows with a label; rows labeled `None` are
    /// skipped. Input must be a probability matrix (rows summing to one).
    pub fn masked_nll(&self, labels: &[Option<usize>]) -> Result<Var<'t>> {
        if labels.len() != self.rows {
            return Err(CgmError::Dimension(format!(
                "masked_nll: {} labels for {} rows",
                labels.len(),
                self.rows
            )));
        }
        let p = self.value();
        let count = labels.iter().flatten().count().max(1) as f64;
        let mut total = 0.0;
        for (i, label) in labels.iter().enumerate() {
            if let Some(c) = label {
                total -= p.get(i, *c).max(1e-300).ln();
            }
        }
        let v = Matrix::from_vec(1, 1, vec![total / count])?;
        Ok(self.tape.push(
            v,
            Op::MaskedNll { probs: self.idx, labels: labels.to_vec() },
        ))
    }

    /// Mean squared error over masked rows of an Sx1 prediction column.
    pub fn masked_mse(&self, targets: &[f64], mask: &[bool]) -> Result<Var<'t>> {
        if self.cols != 1 || targets.len() != self.rows || mask.len() != self.rows {
            return Err(CgmError::Dimension(format!(
                "masked_mse: pred is {}x{}, {} targets, {} mask entries",
                self.rows,
                self.cols,
                targets.len(),
                mask.len()
            )));
        }
        let p = self.value();
        let count = mask.iter().filter(|m| **m).count().max(1) as f64;
        let mut total = 0.0;
        for i in 0..p.rows() {
            if mask[i] {
                let d = p.get(i, 0) - targets[i];
                total += d * d;
            }
        }
        let v = Matrix::from_vec(1, 1, vec![total / count])?;
        Ok(self.tape.push(
            v,
            Op::MaskedMse { pred: self.idx, targets: targets.to_vec(), mask: mask.to_vec() },
        ))
    }

    /// Scalar node with externally supplied input gradients; `parent_grads`
    /// are scaled by the upstream gradient during the backward pass.
    pub fn custom_scalar(
        tape: &'t Tape,
        value: f64,
        parents: &[Var<'t>],
        parent_grads: Vec<Matrix>,
    ) -> Result<Var<'t>> {
        if parents.len() != parent_grads.len() {
            return Err(CgmError::Dimension(
                "custom_scalar: parents and gradients differ in length".into(),
            ));
        }
        for (p, g) in parents.iter().zip(&parent_grads) {
            if (p.rows, p.cols) != g.shape() {
                return Err(CgmError::Dimension(format!(
                    "custom_scalar: parent is {}x{}, gradient is {}x{}",
                    p.rows,
                    p.cols,
                    g.shape().0,
                    g.shape().1
                )));
            }
        }
        let v = Matrix::from_vec(1, 1, vec![value])?;
        Ok(tape.push(
            v,
            Op::Custom {
                parents: parents.iter().map(|p| p.idx).collect(),
                parent_grads,
            },
        ))
    }
}

/// Horizontal concatenation of tape nodes.
pub fn concat_cols<'t>(tape: &'t Tape, parts: &[Var<'t>]) -> Result<Var<'t>> {
    let values: Vec<Matrix> = parts.iter().map(|p| p.value()).collect();
    let refs: Vec<&Matrix> = values.iter().collect();
    let v = Matrix::concat_cols(&refs)?;
    Ok(tape.push(v, Op::ConcatCols(parts.iter().map(|p| p.idx).collect())))
}

/// Vertical concatenation of tape nodes.
pub fn concat_rows<'t>(tape: &'t Tape, parts: &[Var<'t>]) -> Result<Var<'t>> {
    let values: Vec<Matrix> = parts.iter().map(|p| p.value()).collect();
    let refs: Vec<&Matrix> = values.iter().collect();
    let v = Matrix::concat_rows(&refs)?;
    Ok(tape.push(v, Op::ConcatRows(parts.iter().map(|p| p.idx).collect())))
}
