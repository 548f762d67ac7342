//! JSON tensor file format.
//!
//! ```json
//! { "m": 2, "n": 2, "p": 2,
//!   "real": [[[1, 0], [0, 1]], [[0, 0], [0, 0]]],
//!   "imag": [[[0, 0], [0, 0]], [[0, 0], [0, 0]]] }
//! ```
//!
//! `real` and `imag` are indexed `[slice][row][column]`; `imag` is optional
//! and defaults to zero.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::{Tensor3, C64};

type Slices = Vec<Vec<Vec<f64>>>;

#[derive(Debug, Serialize, Deserialize)]
struct TensorFile {
    m: usize,
    n: usize,
    p: usize,
    real: Slices,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    imag: Option<Slices>,
}

fn check_shape(field: &str, data: &Slices, m: usize, n: usize, p: usize) -> Result<()> {
    if data.len() != p {
        return Err(Error::Format(format!(
            "axis p: `{field}` has {} slices, expected {p}",
            data.len()
        )));
    }
    for (k, slice) in data.iter().enumerate() {
        if slice.len() != m {
            return Err(Error::Format(format!(
                "axis m: `{field}` slice {} has {} rows, expected {m}",
                k + 1,
                slice.len()
            )));
        }
        for (i, row) in slice.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Format(format!(
                    "axis n: `{field}` slice {} row {} has {} columns, expected {n}",
                    k + 1,
                    i + 1,
                    row.len()
                )));
            }
        }
    }
    Ok(())
}

pub fn parse_tensor(text: &str) -> Result<Tensor3> {
    let file: TensorFile = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    for (axis, v) in [("m", file.m), ("n", file.n), ("p", file.p)] {
        if v == 0 {
            return Err(Error::Format(format!("axis {axis}: must be positive")));
        }
    }
    let (m, n, p) = (file.m, file.n, file.p);
    check_shape("real", &file.real, m, n, p)?;
    if let Some(imag) = &file.imag {
        check_shape("imag", imag, m, n, p)?;
    }
    Ok(Tensor3::from_fn(m, n, p, |i, j, k| {
        let im = file.imag.as_ref().map_or(0.0, |v| v[k][i][j]);
        C64::new(file.real[k][i][j], im)
    }))
}

/// Serializes a tensor; `imag` is omitted for real tensors.
pub fn to_json(t: &Tensor3) -> String {
    let (m, n, p) = t.dims();
    let grid = |f: &dyn Fn(C64) -> f64| -> Slices {
        (0..p)
            .map(|k| (0..m).map(|i| (0..n).map(|j| f(t.get(i, j, k))).collect()).collect())
            .collect()
    };
    let file = TensorFile {
        m,
        n,
        p,
        real: grid(&|z| z.re),
        imag: if t.is_real() { None } else { Some(grid(&|z| z.im)) },
    };
    serde_json::to_string_pretty(&file).expect("tensor file serializes")
}

pub fn read_tensor(path: impl AsRef<Path>) -> Result<Tensor3> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_tensor(&text).map_err(|e| match e {
        Error::Format(msg) => Error::Format(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn write_tensor(path: impl AsRef<Path>, t: &Tensor3) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, to_json(t) + "\n").map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}
