use std::fmt;
use std::str::FromStr;

use rand::Rng;

use super::{shape_err, Tensor, TensorError};

/// Clamp applied to predictions before taking logs in [`Graph::bce_loss`].
pub const BCE_EPSILON: f64 = 1e-7;

/// Handle to a node of a [`Graph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Var(usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReduceOp {
    Mean,
    Max,
    Min,
    /// Lower median for an even number of rows.
    Median,
}

impl ReduceOp {
    pub fn name(self) -> &'static str {
        match self {
            ReduceOp::Mean => "mean",
            ReduceOp::Max => "max",
            ReduceOp::Min => "min",
            ReduceOp::Median => "median",
        }
    }
}

impl fmt::Display for ReduceOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ReduceOp {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "mean" => Ok(ReduceOp::Mean),
            "max" => Ok(ReduceOp::Max),
            "min" => Ok(ReduceOp::Min),
            "median" => Ok(ReduceOp::Median),
            other => Err(format!("unknown reduction {other:?}")),
        }
    }
}

#[derive(Debug)]
enum Op {
    Leaf,
    Linear {
        input: Var,
        weight: Var,
        bias: Var,
    },
    Relu(Var),
    Sigmoid(Var),
    Dropout {
        input: Var,
        mask: Vec<f64>,
    },
    /// `routes[s * d + c]` is the source row for max/min/median.
    SegmentReduce {
        input: Var,
        offsets: Vec<usize>,
        op: ReduceOp,
        routes: Vec<usize>,
    },
    Gather {
        table: Var,
        indices: Vec<usize>,
    },
    ConcatCols(Vec<Var>),
    Bce {
        pred: Var,
        targets: Vec<f64>,
    },
    Sum(Var),
    WeightedSum {
        input: Var,
        weights: Vec<f64>,
    },
}

#[derive(Debug)]
struct Node {
    value: Tensor,
    op: Op,
    requires_grad: bool,
}

/// A recorded computation. Build it forward, then call [`Graph::backward`].
#[derive(Debug, Default)]
pub struct Graph {
    nodes: Vec<Node>,
    grads: Vec<Option<Vec<f64>>>,
}

/// `c = a * b + beta * c` for row-major operands given by element strides.
#[allow(clippy::too_many_arguments)]
fn gemm(
    m: usize,
    k: usize,
    n: usize,
    a: &[f64],
    a_strides: (usize, usize),
    b: &[f64],
    b_strides: (usize, usize),
    beta: f64,
    c: &mut [f64],
) {
    assert!(m == 0 || k == 0 || a.len() > (m - 1) * a_strides.0 + (k - 1) * a_strides.1);
    assert!(k == 0 || n == 0 || b.len() > (k - 1) * b_strides.0 + (n - 1) * b_strides.1);
    assert_eq!(c.len(), m * n);
    if m == 0 || n == 0 {
        return;
    }
    // SAFETY: the asserts above bound every index matrixmultiply touches.
    unsafe {
        matrixmultiply::dgemm(
            m,
            k,
            n,
            1.0,
            a.as_ptr(),
            a_strides.0 as isize,
            a_strides.1 as isize,
            b.as_ptr(),
            b_strides.0 as isize,
            b_strides.1 as isize,
            beta,
            c.as_mut_ptr(),
            n as isize,
            1,
        );
    }
}

fn sigmoid_scalar(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    fn push(&mut self, value: Tensor, op: Op, requires_grad: bool) -> Var {
        self.nodes.push(Node { value, op, requires_grad });
        Var(self.nodes.len() - 1)
    }

    fn node(&self, v: Var) -> &Node {
        &self.nodes[v.0]
    }

    fn needs(&self, v: Var) -> bool {
        self.nodes[v.0].requires_grad
    }

    /// A differentiable input; its gradient is available after backward.
    pub fn leaf(&mut self, value: &Tensor) -> Var {
        let t = Tensor { shape: value.shape.clone(), data: value.data.clone(), grad: None };
        self.push(t, Op::Leaf, true)
    }

    /// A non-differentiable input.
    pub fn constant(&mut self, value: Tensor) -> Var {
        let t = Tensor { grad: None, ..value };
        self.push(t, Op::Leaf, false)
    }

    pub fn value(&self, v: Var) -> &Tensor {
        &self.node(v).value
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Gradient of the last `backward` output with respect to `v`.
    pub fn grad(&self, v: Var) -> Option<&[f64]> {
        self.grads.get(v.0).and_then(|g| g.as_deref())
    }

    /// Affine map of rows: `input · weightᵀ + bias`.
    pub fn linear(&mut self, input: Var, weight: Var, bias: Var) -> Result<Var, TensorError> {
        let (rows, p) = self.value(input).dims2().ok_or_else(|| shape_err("linear", "input must be 2-d"))?;
        let (q, wp) = self.value(weight).dims2().ok_or_else(|| shape_err("linear", "weight must be 2-d"))?;
        if wp != p {
            return Err(shape_err("linear", format!("input has {p} columns, weight expects {wp}")));
        }
        if self.value(bias).shape() != [q] {
            return Err(shape_err("linear", format!("bias shape {:?}, expected [{q}]", self.value(bias).shape())));
        }
        let mut out = vec![0.0; rows * q];
        for r in 0..rows {
            out[r * q..(r + 1) * q].copy_from_slice(self.value(bias).data());
        }
        gemm(rows, p, q, self.value(input).data(), (p, 1), self.value(weight).data(), (1, p), 1.0, &mut out);
        let rg = self.needs(input) || self.needs(weight) || self.needs(bias);
        Ok(self.push(Tensor { shape: vec![rows, q], data: out, grad: None }, Op::Linear { input, weight, bias }, rg))
    }

    pub fn relu(&mut self, input: Var) -> Var {
        let x = self.value(input);
        let data = x.data().iter().map(|&v| v.max(0.0)).collect();
        let t = Tensor { shape: x.shape.clone(), data, grad: None };
        let rg = self.needs(input);
        self.push(t, Op::Relu(input), rg)
    }

    pub fn sigmoid(&mut self, input: Var) -> Var {
        let x = self.value(input);
        let data = x.data().iter().map(|&v| sigmoid_scalar(v)).collect();
        let t = Tensor { shape: x.shape.clone(), data, grad: None };
        let rg = self.needs(input);
        self.push(t, Op::Sigmoid(input), rg)
    }

    /// Inverted dropout. Identity when `training` is false or `keep_prob == 1`.
    pub fn dropout<R: Rng + ?Sized>(
        &mut self,
        input: Var,
        keep_prob: f64,
        training: bool,
        rng: &mut R,
    ) -> Result<Var, TensorError> {
        if !(keep_prob > 0.0 && keep_prob <= 1.0) {
            return Err(TensorError::BadKeepProb(keep_prob));
        }
        if !training || keep_prob == 1.0 {
            return Ok(input);
        }
        let scale = 1.0 / keep_prob;
        let x = self.value(input);
        let mask: Vec<f64> = (0..x.numel()).map(|_| if rng.random::<f64>() < keep_prob { scale } else { 0.0 }).collect();
        let data = x.data().iter().zip(&mask).map(|(v, m)| v * m).collect();
        let t = Tensor { shape: x.shape.clone(), data, grad: None };
        let rg = self.needs(input);
        Ok(self.push(t, Op::Dropout { input, mask }, rg))
    }

    /// Column-wise reduction of a `[k × d]` block to a `[d]` vector.
    pub fn elementwise_reduce(&mut self, rows: Var, op: ReduceOp) -> Result<Var, TensorError> {
        let (k, d) = self.value(rows).dims2().ok_or_else(|| shape_err("elementwise_reduce", "input must be 2-d"))?;
        if k == 0 {
            return Err(TensorError::Empty { op: "elementwise_reduce" });
        }
        self.reduce_impl(rows, vec![0, k], op, vec![d])
    }

    /// Column-wise reduction of consecutive row segments. Segment `s` covers
    /// rows `offsets[s]..offsets[s + 1]`; the output is `[segments × d]`.
    pub fn segment_reduce(&mut self, rows: Var, offsets: &[usize], op: ReduceOp) -> Result<Var, TensorError> {
        let (k, d) = self.value(rows).dims2().ok_or_else(|| shape_err("segment_reduce", "input must be 2-d"))?;
        if offsets.len() < 2 || offsets[0] != 0 || *offsets.last().unwrap_or(&0) != k {
            return Err(shape_err("segment_reduce", format!("offsets must run from 0 to {k}")));
        }
        if offsets.windows(2).any(|w| w[1] <= w[0]) {
            return Err(TensorError::Empty { op: "segment_reduce" });
        }
        let segments = offsets.len() - 1;
        self.reduce_impl(rows, offsets.to_vec(), op, vec![segments, d])
    }

    fn reduce_impl(&mut self, rows: Var, offsets: Vec<usize>, op: ReduceOp, shape: Vec<usize>) -> Result<Var, TensorError> {
        let x = self.value(rows);
        let d = x.shape()[1];
        let segments = offsets.len() - 1;
        let mut out = vec![0.0; segments * d];
        let mut routes = Vec::new();
        match op {
            ReduceOp::Mean => {
                for s in 0..segments {
                    let o = &mut out[s * d..(s + 1) * d];
                    for r in offsets[s]..offsets[s + 1] {
                        o.iter_mut().zip(x.row(r)).for_each(|(a, b)| *a += b);
                    }
                    let k = (offsets[s + 1] - offsets[s]) as f64;
                    o.iter_mut().for_each(|a| *a /= k);
                }
            }
            ReduceOp::Max | ReduceOp::Min => {
                routes = vec![0; segments * d];
                let better = |cand: f64, best: f64| if op == ReduceOp::Max { cand > best } else { cand < best };
                for s in 0..segments {
                    let first = offsets[s];
                    for c in 0..d {
                        let mut best_row = first;
                        for r in first + 1..offsets[s + 1] {
                            if better(x.data[r * d + c], x.data[best_row * d + c]) {
                                best_row = r;
                            }
                        }
                        routes[s * d + c] = best_row;
                        out[s * d + c] = x.data[best_row * d + c];
                    }
                }
            }
            ReduceOp::Median => {
                routes = vec![0; segments * d];
                let mut col: Vec<(f64, usize)> = Vec::new();
                for s in 0..segments {
                    let k = offsets[s + 1] - offsets[s];
                    for c in 0..d {
                        col.clear();
                        col.extend((offsets[s]..offsets[s + 1]).map(|r| (x.data[r * d + c], r)));
                        col.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
                        let (v, r) = col[(k - 1) / 2];
                        routes[s * d + c] = r;
                        out[s * d + c] = v;
                    }
                }
            }
        }
        let rg = self.needs(rows);
        Ok(self.push(Tensor { shape, data: out, grad: None }, Op::SegmentReduce { input: rows, offsets, op, routes }, rg))
    }

    /// Rows `indices` of a 2-d `table`, in order.
    pub fn gather_rows(&mut self, table: Var, indices: &[usize]) -> Result<Var, TensorError> {
        let (n, d) = self.value(table).dims2().ok_or_else(|| shape_err("gather_rows", "table must be 2-d"))?;
        let mut out = Vec::with_capacity(indices.len() * d);
        for &i in indices {
            if i >= n {
                return Err(TensorError::Index { index: i, rows: n });
            }
            out.extend_from_slice(self.value(table).row(i));
        }
        let rg = self.needs(table);
        let t = Tensor { shape: vec![indices.len(), d], data: out, grad: None };
        Ok(self.push(t, Op::Gather { table, indices: indices.to_vec() }, rg))
    }

    /// Side-by-side concatenation of 2-d blocks with equal row counts.
    pub fn concat_cols(&mut self, parts: &[Var]) -> Result<Var, TensorError> {
        let dims: Vec<(usize, usize)> = parts
            .iter()
            .map(|&p| self.value(p).dims2().ok_or_else(|| shape_err("concat_cols", "inputs must be 2-d")))
            .collect::<Result<_, _>>()?;
        let rows = dims.first().map(|d| d.0).ok_or(TensorError::Empty { op: "concat_cols" })?;
        if dims.iter().any(|d| d.0 != rows) {
            return Err(shape_err("concat_cols", format!("row counts differ: {dims:?}")));
        }
        let width: usize = dims.iter().map(|d| d.1).sum();
        let mut out = Vec::with_capacity(rows * width);
        for r in 0..rows {
            for &p in parts {
                out.extend_from_slice(self.value(p).row(r));
            }
        }
        let rg = parts.iter().any(|&p| self.needs(p));
        Ok(self.push(Tensor { shape: vec![rows, width], data: out, grad: None }, Op::ConcatCols(parts.to_vec()), rg))
    }

    /// Mean binary cross-entropy with predictions clamped to `[ε, 1 − ε]`.
    pub fn bce_loss(&mut self, predictions: Var, targets: &Tensor) -> Result<Var, TensorError> {
        let p = self.value(predictions);
        if p.shape() != targets.shape() {
            return Err(shape_err("bce_loss", format!("{:?} vs {:?}", p.shape(), targets.shape())));
        }
        if p.numel() == 0 {
            return Err(TensorError::Empty { op: "bce_loss" });
        }
        if let Some(&bad) = targets.data().iter().find(|&&y| y != 0.0 && y != 1.0) {
            return Err(TensorError::BadTarget(bad));
        }
        let total: f64 = p
            .data()
            .iter()
            .zip(targets.data())
            .map(|(&yh, &y)| {
                let yh = yh.clamp(BCE_EPSILON, 1.0 - BCE_EPSILON);
                if y == 1.0 {
                    -yh.ln()
                } else {
                    -(1.0 - yh).ln()
                }
            })
            .sum();
        let loss = total / p.numel() as f64;
        let rg = self.needs(predictions);
        Ok(self.push(Tensor::scalar(loss), Op::Bce { pred: predictions, targets: targets.data().to_vec() }, rg))
    }

    pub fn sum(&mut self, input: Var) -> Var {
        let s = self.value(input).data().iter().sum();
        let rg = self.needs(input);
        self.push(Tensor::scalar(s), Op::Sum(input), rg)
    }

    /// `Σ weights[i] · input[i]` as a scalar.
    pub fn weighted_sum(&mut self, input: Var, weights: &[f64]) -> Result<Var, TensorError> {
        let x = self.value(input);
        if x.numel() != weights.len() {
            return Err(shape_err("weighted_sum", format!("{} values, {} weights", x.numel(), weights.len())));
        }
        let s = x.data().iter().zip(weights).map(|(a, b)| a * b).sum();
        let rg = self.needs(input);
        Ok(self.push(Tensor::scalar(s), Op::WeightedSum { input, weights: weights.to_vec() }, rg))
    }

    /// Reverse pass from the scalar `output`.
    pub fn backward(&mut self, output: Var) -> Result<(), TensorError> {
        if self.value(output).numel() != 1 {
            return Err(TensorError::NonScalarLoss(self.value(output).shape().to_vec()));
        }
        let mut grads: Vec<Option<Vec<f64>>> = (0..self.nodes.len()).map(|_| None).collect();
        grads[output.0] = Some(vec![1.0]);
        for i in (0..=output.0).rev() {
            let Some(g) = grads[i].take() else { continue };
            if self.nodes[i].requires_grad {
                self.backward_node(i, &g, &mut grads);
            }
            grads[i] = Some(g);
        }
        self.grads = grads;
        Ok(())
    }

    fn backward_node(&self, i: usize, g: &[f64], grads: &mut [Option<Vec<f64>>]) {
        let nodes = &self.nodes;
        let len_of = |v: Var| nodes[v.0].value.numel();
        let mut acc = |v: Var, f: &mut dyn FnMut(&mut [f64])| {
            if nodes[v.0].requires_grad {
                let buf = grads[v.0].get_or_insert_with(|| vec![0.0; len_of(v)]);
                f(buf);
            }
        };
        match &nodes[i].op {
            Op::Leaf => {}
            Op::Linear { input, weight, bias } => {
                let x = &nodes[input.0].value;
                let w = &nodes[weight.0].value;
                let (rows, p) = (x.shape[0], x.shape[1]);
                let q = w.shape[0];
                acc(*input, &mut |buf| gemm(rows, q, p, g, (q, 1), w.data(), (p, 1), 1.0, buf));
                acc(*weight, &mut |buf| gemm(q, rows, p, g, (1, q), x.data(), (p, 1), 1.0, buf));
                acc(*bias, &mut |buf| {
                    for r in 0..rows {
                        buf.iter_mut().zip(&g[r * q..(r + 1) * q]).for_each(|(b, gv)| *b += gv);
                    }
                });
            }
            Op::Relu(input) => {
                let x = nodes[input.0].value.data();
                acc(*input, &mut |buf| {
                    for ((b, &gv), &xv) in buf.iter_mut().zip(g).zip(x) {
                        if xv > 0.0 {
                            *b += gv;
                        }
                    }
                });
            }
            Op::Sigmoid(input) => {
                let y = nodes[i].value.data();
                acc(*input, &mut |buf| {
                    for ((b, &gv), &yv) in buf.iter_mut().zip(g).zip(y) {
                        *b += gv * yv * (1.0 - yv);
                    }
                });
            }
            Op::Dropout { input, mask } => {
                acc(*input, &mut |buf| buf.iter_mut().zip(g).zip(mask).for_each(|((b, gv), m)| *b += gv * m));
            }
            Op::SegmentReduce { input, offsets, op, routes } => {
                let d = nodes[input.0].value.shape[1];
                acc(*input, &mut |buf| {
                    for s in 0..offsets.len() - 1 {
                        let gs = &g[s * d..(s + 1) * d];
                        if *op == ReduceOp::Mean {
                            let k = (offsets[s + 1] - offsets[s]) as f64;
                            for r in offsets[s]..offsets[s + 1] {
                                buf[r * d..(r + 1) * d].iter_mut().zip(gs).for_each(|(b, gv)| *b += gv / k);
                            }
                        } else {
                            for c in 0..d {
                                buf[routes[s * d + c] * d + c] += gs[c];
                            }
                        }
                    }
                });
            }
            Op::Gather { table, indices } => {
                let d = nodes[table.0].value.shape[1];
                acc(*table, &mut |buf| {
                    for (r, &idx) in indices.iter().enumerate() {
                        buf[idx * d..(idx + 1) * d].iter_mut().zip(&g[r * d..(r + 1) * d]).for_each(|(b, gv)| *b += gv);
                    }
                });
            }
            Op::ConcatCols(parts) => {
                let rows = nodes[i].value.shape[0];
                let width = nodes[i].value.shape[1];
                let mut start = 0;
                for &p in parts {
                    let c = nodes[p.0].value.shape[1];
                    acc(p, &mut |buf| {
                        for r in 0..rows {
                            buf[r * c..(r + 1) * c]
                                .iter_mut()
                                .zip(&g[r * width + start..r * width + start + c])
                                .for_each(|(b, gv)| *b += gv);
                        }
                    });
                    start += c;
                }
            }
            Op::Bce { pred, targets } => {
                let p = nodes[pred.0].value.data();
                let n = p.len() as f64;
                acc(*pred, &mut |buf| {
                    for ((b, &yh), &y) in buf.iter_mut().zip(p).zip(targets) {
                        if (BCE_EPSILON..=1.0 - BCE_EPSILON).contains(&yh) {
                            let d = if y == 1.0 { -1.0 / yh } else { 1.0 / (1.0 - yh) };
                            *b += g[0] * d / n;
                        }
                    }
                });
            }
            Op::Sum(input) => {
                acc(*input, &mut |buf| buf.iter_mut().for_each(|b| *b += g[0]));
            }
            Op::WeightedSum { input, weights } => {
                acc(*input, &mut |buf| buf.iter_mut().zip(weights).for_each(|(b, w)| *b += g[0] * w));
            }
        }
    }
}
