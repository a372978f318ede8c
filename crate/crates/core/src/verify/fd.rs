use crate::divdiff::ScalarFunction;
use crate::error::{Error, Result};
use crate::linalg::{schatten_norm, SelfAdjointMatrix};
use crate::opint::{trace_second_derivative, trace_value};

fn along(a: &SelfAdjointMatrix, b: &SelfAdjointMatrix, t: f64) -> SelfAdjointMatrix {
    a.add_scaled(t, b)
}

/// Central difference of `t ↦ Tr f(A + tB)` at 0 of order 1 or 2.
pub fn fd_oracle(f: &ScalarFunction, a: &SelfAdjointMatrix, b: &SelfAdjointMatrix, order: u8, step: f64) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::dimension(a.dim(), b.dim()));
    }
    let psi = |t: f64| trace_value(f, &along(a, b, t));
    match order {
        1 => Ok((psi(step)? - psi(-step)?) / (2.0 * step)),
        2 => Ok((psi(step)? - 2.0 * psi(0.0)? + psi(-step)?) / (step * step)),
        _ => Err(Error::parameter("order", order as f64, "must be 1 or 2")),
    }
}

/// Second central difference of `t ↦ ‖A + tB‖_p²` at 0.
pub fn norm_sq_fd(p: f64, a: &SelfAdjointMatrix, b: &SelfAdjointMatrix, step: f64) -> Result<f64> {
    let n = |t: f64| schatten_norm(along(a, b, t).as_matrix(), p).map(|v| v * v);
    Ok((n(step)? - 2.0 * n(0.0)? + n(-step)?) / (step * step))
}

/// `|fd(h) − exact| / |fd(h/2) − exact|` for the order-2 oracle; about 4 on smooth inputs.
pub fn richardson_ratio(f: &ScalarFunction, a: &SelfAdjointMatrix, b: &SelfAdjointMatrix, step: f64) -> Result<f64> {
    let exact = trace_second_derivative(f, a, b)?;
    let coarse = fd_oracle(f, a, b, 2, step)? - exact;
    let fine = fd_oracle(f, a, b, 2, step / 2.0)? - exact;
    Ok(coarse.abs() / fine.abs())
}
