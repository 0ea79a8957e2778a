//! Dense double-precision tensors with reverse-mode differentiation.
//!
//! A [`Graph`] records operations on [`Var`] handles; [`Graph::backward`]
//! walks the record in reverse and accumulates gradients. Leaves created with
//! [`Graph::leaf`] receive gradients, leaves created with [`Graph::constant`]
//! do not. Parameters live outside the graph as [`Tensor`]s and are copied in
//! each step.

mod adam;
mod checkpoint;
mod graph;

pub use adam::Adam;
pub use checkpoint::{read_tensors, write_tensors};
pub use graph::{Graph, ReduceOp, Var};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum TensorError {
    #[error("shape mismatch in {op}: {detail}")]
    Shape { op: &'static str, detail: String },
    #[error("{op} needs a non-empty input")]
    Empty { op: &'static str },
    #[error("{values} values do not fill shape {shape:?}")]
    ValueCount { values: usize, shape: Vec<usize> },
    #[error("target {0} is not 0 or 1")]
    BadTarget(f64),
    #[error("keep probability {0} is outside (0, 1]")]
    BadKeepProb(f64),
    #[error("row index {index} out of range for {rows} rows")]
    Index { index: usize, rows: usize },
    #[error("parameter {0} has no gradient")]
    MissingGradient(usize),
    #[error("backward needs a scalar output, got shape {0:?}")]
    NonScalarLoss(Vec<usize>),
    #[error("checkpoint line {line}: {message}")]
    Checkpoint { line: usize, message: String },
}

pub(crate) fn shape_err(op: &'static str, detail: impl Into<String>) -> TensorError {
    TensorError::Shape { op, detail: detail.into() }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tensor {
    shape: Vec<usize>,
    data: Vec<f64>,
    grad: Option<Vec<f64>>,
}

impl Tensor {
    pub fn new(shape: Vec<usize>, data: Vec<f64>) -> Result<Self, TensorError> {
        if shape.iter().product::<usize>() != data.len() {
            return Err(TensorError::ValueCount { values: data.len(), shape });
        }
        Ok(Tensor { shape, data, grad: None })
    }

    pub fn zeros(shape: Vec<usize>) -> Self {
        let n = shape.iter().product();
        Tensor { shape, data: vec![0.0; n], grad: None }
    }

    pub fn scalar(value: f64) -> Self {
        Tensor { shape: vec![], data: vec![value], grad: None }
    }

    pub fn vector(data: Vec<f64>) -> Self {
        Tensor { shape: vec![data.len()], data, grad: None }
    }

    /// Row-major matrix from nested rows. Panics on ragged input.
    pub fn matrix(rows: &[&[f64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        Tensor { shape: vec![rows.len(), cols], data: rows.concat(), grad: None }
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn numel(&self) -> usize {
        self.data.len()
    }

    /// Rows and columns of a 2-d tensor.
    pub fn dims2(&self) -> Option<(usize, usize)> {
        match self.shape[..] {
            [r, c] => Some((r, c)),
            _ => None,
        }
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let c = *self.shape.last().unwrap_or(&1);
        &self.data[i * c..(i + 1) * c]
    }

    pub fn grad(&self) -> Option<&[f64]> {
        self.grad.as_deref()
    }

    /// Adds `g` into the stored gradient, creating it if absent.
    pub fn accumulate_grad(&mut self, g: &[f64]) -> Result<(), TensorError> {
        if g.len() != self.data.len() {
            return Err(shape_err("accumulate_grad", format!("{} vs {}", g.len(), self.data.len())));
        }
        match &mut self.grad {
            Some(acc) => acc.iter_mut().zip(g).for_each(|(a, b)| *a += b),
            None => self.grad = Some(g.to_vec()),
        }
        Ok(())
    }

    pub fn set_grad(&mut self, g: Option<Vec<f64>>) -> Result<(), TensorError> {
        if let Some(g) = &g {
            if g.len() != self.data.len() {
                return Err(shape_err("set_grad", format!("{} vs {}", g.len(), self.data.len())));
            }
        }
        self.grad = g;
        Ok(())
    }

    pub fn clear_grad(&mut self) {
        self.grad = None;
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}
