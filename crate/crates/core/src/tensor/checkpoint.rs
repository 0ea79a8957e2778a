//! Text container for named tensors.
//!
//! ```text
//! tensor <name> <rank> <dim0> <dim1> ...
//! <values of one innermost row, space separated>
//! ...
//! end
//! ```
//!
//! Values use Rust's shortest round-trip float formatting, so reading a
//! written container gives back bit-identical tensors.

use std::fmt::Write as _;

use super::{Tensor, TensorError};

pub fn write_tensors(tensors: &[(String, &Tensor)]) -> String {
    let mut out = String::new();
    for (name, t) in tensors {
        assert!(!name.is_empty() && !name.contains(char::is_whitespace), "bad tensor name {name:?}");
        let _ = write!(out, "tensor {name} {}", t.shape().len());
        for d in t.shape() {
            let _ = write!(out, " {d}");
        }
        out.push('\n');
        let width = t.shape().last().copied().unwrap_or(1).max(1);
        for row in t.data().chunks(width) {
            let line: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out.push_str("end\n");
    }
    out
}

/// Header lines and named tensors of a checkpoint.
pub type Parsed = (Vec<String>, Vec<(String, Tensor)>);

/// Parses every tensor in `text`. Lines before the first `tensor` line are
/// returned untouched so callers can keep their own header there.
pub fn read_tensors(text: &str) -> Result<Parsed, TensorError> {
    let err = |line: usize, message: String| TensorError::Checkpoint { line, message };
    let mut header = Vec::new();
    let mut tensors = Vec::new();
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l)).peekable();
    while let Some(&(_, l)) = lines.peek() {
        if l.starts_with("tensor ") {
            break;
        }
        header.push(l.to_string());
        lines.next();
    }
    while let Some((no, line)) = lines.next() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() < 3 || fields[0] != "tensor" {
            return Err(err(no, format!("expected tensor header, got {line:?}")));
        }
        let name = fields[1].to_string();
        let rank: usize = fields[2].parse().map_err(|_| err(no, "bad rank".into()))?;
        if fields.len() != 3 + rank {
            return Err(err(no, format!("rank {rank} but {} dims", fields.len() - 3)));
        }
        let shape: Vec<usize> =
            fields[3..].iter().map(|d| d.parse().map_err(|_| err(no, format!("bad dim {d:?}")))).collect::<Result<_, _>>()?;
        let count: usize = shape.iter().product();
        let mut data = Vec::with_capacity(count);
        loop {
            let (no, l) = lines.next().ok_or_else(|| err(no, format!("tensor {name} is truncated")))?;
            if l == "end" {
                break;
            }
            for v in l.split_whitespace() {
                data.push(v.parse::<f64>().map_err(|_| err(no, format!("bad value {v:?}")))?);
            }
        }
        if data.len() != count {
            return Err(err(no, format!("tensor {name}: expected {count} values, got {}", data.len())));
        }
        tensors.push((name, Tensor::new(shape, data)?));
    }
    Ok((header, tensors))
}
