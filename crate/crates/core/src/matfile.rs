//! Text container for Green's blocks: one JSON header line, then one line
//! per matrix row holding "re im" pairs with 17 significant digits.

use std::io::{BufRead, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::greens1d::{GreensBlock1D, Variant};
use crate::greens2d::{ConvolutionOptions, GreensBlock2D, ParameterSet};
use crate::operators::PhysicalParams;
use crate::weight::QuadratureConfig;

pub const FORMAT_NAME: &str = "sturmian-matrix";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BlockKind {
    Greens1d,
    Greens2d,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixHeader {
    pub format: String,
    pub version: u32,
    pub library_version: String,
    pub kind: BlockKind,
    pub params: PhysicalParams,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<Variant>,
    pub formula: String,
    pub gauge: String,
    pub rows: usize,
    pub cols: usize,
    pub flattening: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quadrature: Option<QuadratureConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parameter_set: Option<ParameterSet>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parameter_choice: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub options: Option<ConvolutionOptions>,
    /// Achieved quadrature error estimate of a 2D block.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quadrature_error: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixFile {
    pub header: MatrixHeader,
    /// Row-major, `rows * cols` entries.
    pub data: Vec<Complex64>,
}

impl MatrixFile {
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.header.cols + col]
    }

    pub fn from_block1d(block: &GreensBlock1D) -> Self {
        let formula = match block.variant {
            Variant::Xi => "g_nm = (i/2k)((chi-1)/chi) theta^(n+m+1) chi^(-m) p_min(n,m) q_max(n,m)",
            Variant::Eta => "xi formula with k -> -k, t -> -t",
        };
        let header = MatrixHeader {
            format: FORMAT_NAME.into(),
            version: FORMAT_VERSION,
            library_version: env!("CARGO_PKG_VERSION").into(),
            kind: BlockKind::Greens1d,
            params: block.params,
            variant: Some(block.variant),
            formula: formula.into(),
            gauge: block.gauge_description(),
            rows: block.order,
            cols: block.order,
            flattening: "row n, column m".into(),
            quadrature: None,
            parameter_set: None,
            parameter_choice: None,
            options: None,
            quadrature_error: None,
        };
        let data = block.elements.iter().flatten().copied().collect();
        Self { header, data }
    }

    pub fn from_block2d(block: &GreensBlock2D) -> Self {
        let y = block.options.eta_gauge;
        let gauge = if y == Complex64::new(0.0, 0.0) {
            "y=0".to_string()
        } else {
            format!("eta: y={}{:+}i", y.re, y.im)
        };
        let formula = if block.params.c == 0.0 {
            "(i/zeta^m1)((zeta-1)/zeta)[PV int rho0 p_n1 p_m1 g^eta_n2m2(t0-t) dt - (i/2)(-1)^(n1+m1) g^eta_n2m2(t0)]"
        } else {
            "(i/zeta^m1)((zeta-1)/zeta) theta^(n1-m1)[PV int rho p_n1 p_m1 g^eta_n2m2(tau - t0/root) dtau - (i/2)(-1)^(n1+m1) g^eta_n2m2(-t0/root)]"
        };
        let n = block.order;
        let header = MatrixHeader {
            format: FORMAT_NAME.into(),
            version: FORMAT_VERSION,
            library_version: env!("CARGO_PKG_VERSION").into(),
            kind: BlockKind::Greens2d,
            params: block.params,
            variant: None,
            formula: formula.into(),
            gauge,
            rows: n * n,
            cols: n * n,
            flattening: "row-major over ((n1,n2),(m1,m2)); row = n1*N+n2, column = m1*N+m2".into(),
            quadrature: Some(block.quadrature.clone()),
            parameter_set: Some(block.parameter_set),
            parameter_choice: Some(block.parameter_set.description().into()),
            options: Some(block.options.clone()),
            quadrature_error: Some(block.quadrature_error),
        };
        Self {
            header,
            data: block.elements.clone(),
        }
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        let header = serde_json::to_string(&self.header).map_err(|e| Error::Format(e.to_string()))?;
        let io = |e: std::io::Error| Error::Format(e.to_string());
        writeln!(w, "{header}").map_err(io)?;
        for row in self.data.chunks(self.header.cols.max(1)) {
            let line: Vec<String> = row.iter().map(|z| format!("{:.16e} {:.16e}", z.re, z.im)).collect();
            writeln!(w, "{}", line.join(" ")).map_err(io)?;
        }
        Ok(())
    }

    pub fn to_string_lossless(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_to(&mut buf)?;
        String::from_utf8(buf).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn read_from<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines();
        let first = lines
            .next()
            .ok_or_else(|| Error::Format("empty matrix file".into()))?
            .map_err(|e| Error::Format(e.to_string()))?;
        let header: MatrixHeader = serde_json::from_str(&first).map_err(|e| Error::Format(format!("header: {e}")))?;
        if header.format != FORMAT_NAME {
            return Err(Error::Format(format!("unknown format {:?}", header.format)));
        }
        if header.version != FORMAT_VERSION {
            return Err(Error::Format(format!("unsupported version {}", header.version)));
        }
        let mut data = Vec::with_capacity(header.rows * header.cols);
        for (i, line) in lines.enumerate() {
            let line = line.map_err(|e| Error::Format(e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            let nums: Vec<f64> = line
                .split_whitespace()
                .map(|s| s.parse::<f64>().map_err(|e| Error::Format(format!("row {i}: {e}"))))
                .collect::<Result<_>>()?;
            if nums.len() != 2 * header.cols {
                return Err(Error::Format(format!("row {i} has {} numbers, expected {}", nums.len(), 2 * header.cols)));
            }
            data.extend(nums.chunks(2).map(|c| Complex64::new(c[0], c[1])));
        }
        if data.len() != header.rows * header.cols {
            return Err(Error::Format(format!("expected {} rows", header.rows)));
        }
        Ok(Self { header, data })
    }
}
