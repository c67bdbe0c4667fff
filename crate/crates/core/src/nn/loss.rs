use crate::error::{CtnnError, Result};

/// Mean squared error `(1/n) * sum((a_i - b_i)^2)`, accumulated in `f64`.
///
/// This is both the training loss (on the normalized scale) and the
/// thalamic difference score (on the raw intensity scale).
pub fn mse<T: Copy + Into<f64>>(a: &[T], b: &[T]) -> Result<f64> {
    CtnnError::check_len(a.len(), b.len())?;
    if a.is_empty() {
        return Err(CtnnError::InvalidArgument("mse of empty vectors".into()));
    }
    let sum: f64 = a
        .iter()
        .zip(b)
        .map(|(&x, &y)| {
            let d = x.into() - y.into();
            d * d
        })
        .sum();
    Ok(sum / a.len() as f64)
}
