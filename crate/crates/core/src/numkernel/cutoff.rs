use crate::error::{Error, Result};

fn bump(t: f64) -> f64 {
    if t > 0.0 {
        (-1.0 / t).exp()
    } else {
        0.0
    }
}

/// The fixed smooth cutoff: 1 on `[0,1]`, 0 on `[2,inf)`, and a smooth
/// monotone bridge `g(2-x) / (g(2-x) + g(x-1))` with `g(t) = exp(-1/t)` between.
///
/// Negative inputs are treated as 0; use [`cutoff_eval`] for the checked form.
#[inline]
pub fn cutoff(x: f64) -> f64 {
    if x <= 1.0 {
        1.0
    } else if x >= 2.0 {
        0.0
    } else {
        let a = bump(2.0 - x);
        let b = bump(x - 1.0);
        a / (a + b)
    }
}

pub fn cutoff_eval(x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::invalid(format!(
            "cutoff argument must be >= 0, got {x}"
        )));
    }
    Ok(cutoff(x))
}
