use std::path::Path;

use entwit_core::{BipartiteDims, CMatrix, DensityMatrix, Error as CoreError};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Failure classes mapped onto process exit codes.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::FilterAnnihilates(_) | CoreError::Numeric(_) => CliError::Numeric(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn input_err(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub m: usize,
    pub n: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SquareFile {
    pub d: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RectFile {
    pub rows: usize,
    pub cols: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameFile {
    pub u: SquareFile,
    pub v: SquareFile,
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| input_err(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| input_err(format!("malformed {}: {e}", path.display())))
}

fn matrix_from_parts(rows: usize, cols: usize, re: &[f64], im: &[f64]) -> CliResult<CMatrix> {
    let len = rows * cols;
    if re.len() != len || im.len() != len {
        return Err(input_err(format!(
            "expected {len} real and imaginary entries, got {} and {}",
            re.len(),
            im.len()
        )));
    }
    if re.iter().chain(im).any(|x| !x.is_finite()) {
        return Err(input_err("matrix entries must be finite"));
    }
    Ok(CMatrix::from_fn(rows, cols, |r, c| {
        let k = r * cols + c;
        Complex64::new(re[k], im[k])
    }))
}

fn parts(mat: &CMatrix) -> (Vec<f64>, Vec<f64>) {
    let mut re = Vec::with_capacity(mat.len());
    let mut im = Vec::with_capacity(mat.len());
    for r in 0..mat.nrows() {
        for c in 0..mat.ncols() {
            re.push(round15(mat[(r, c)].re));
            im.push(round15(mat[(r, c)].im));
        }
    }
    (re, im)
}

pub fn read_state(path: &Path) -> CliResult<DensityMatrix> {
    let file: StateFile = read_json(path)?;
    let dims = BipartiteDims::new(file.m, file.n)?;
    let d = dims.total();
    let mat = matrix_from_parts(d, d, &file.re, &file.im)?;
    Ok(entwit_core::qstate::validate_density(mat, dims)?)
}

pub fn state_file(rho: &DensityMatrix) -> StateFile {
    let (re, im) = parts(rho.matrix());
    StateFile {
        m: rho.dims().m(),
        n: rho.dims().n(),
        re,
        im,
    }
}

pub fn read_frame(path: &Path) -> CliResult<(CMatrix, CMatrix)> {
    let file: FrameFile = read_json(path)?;
    let u = matrix_from_parts(file.u.d, file.u.d, &file.u.re, &file.u.im)?;
    let v = matrix_from_parts(file.v.d, file.v.d, &file.v.re, &file.v.im)?;
    Ok((u, v))
}

pub fn square_file(mat: &CMatrix) -> SquareFile {
    let (re, im) = parts(mat);
    SquareFile {
        d: mat.nrows(),
        re,
        im,
    }
}

pub fn rect_file(mat: &CMatrix) -> RectFile {
    let (re, im) = parts(mat);
    RectFile {
        rows: mat.nrows(),
        cols: mat.ncols(),
        re,
        im,
    }
}

/// Rounds to 15 significant digits and folds `-0` into `0`.
pub fn round15(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    let r: f64 = format!("{x:.14e}").parse().expect("formatted float parses");
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// Shortest representation of `x` after [`round15`].
pub fn fmt_num(x: f64) -> String {
    format!("{}", round15(x))
}

/// A scalar or an inclusive `start:stop:step` grid.
pub fn parse_grid(s: &str) -> CliResult<Vec<f64>> {
    let bad = |why: &str| input_err(format!("bad grid `{s}`: {why}"));
    let fields: Vec<&str> = s.split(':').collect();
    let nums: Vec<f64> = fields
        .iter()
        .map(|f| f.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| bad("not a number"))?;
    if nums.iter().any(|x| !x.is_finite()) {
        return Err(bad("values must be finite"));
    }
    match nums[..] {
        [x] => Ok(vec![x]),
        [start, stop, step] => {
            if !(step > 0.0) {
                return Err(bad("step must be positive"));
            }
            if stop < start {
                return Err(bad("stop lies below start"));
            }
            let count = ((stop - start) / step + 1e-9).floor();
            if count > 1e6 {
                return Err(bad("more than a million points"));
            }
            // snap to 12 decimals so 0.1-style steps land on exact grid values
            Ok((0..=count as usize)
                .map(|i| ((start + i as f64 * step) * 1e12).round() / 1e12)
                .collect())
        }
        _ => Err(bad("expected a number or start:stop:step")),
    }
}

pub fn parse_scalar(s: &str, name: &str) -> CliResult<f64> {
    let g = parse_grid(s)?;
    match g[..] {
        [x] => Ok(x),
        _ => Err(input_err(format!("--{name} takes a single value here"))),
    }
}
