//! CSV and JSON writers. Every CSV starts with `#`-prefixed header lines.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::analysis::{CollapseScan, FitResult};
use crate::bloch::{angles_from_bloch, Axis};
use crate::dicke::{c64, DensityMatrix, DensityMatrixRecord, EvolveResult};
use crate::meanfield::{FixedPoint, PortraitData, Trajectory};
use crate::scalar::Real;

pub fn write_header<W: Write + ?Sized>(w: &mut W, header: &[String]) -> io::Result<()> {
    for line in header {
        for part in line.lines() {
            writeln!(w, "# {part}")?;
        }
    }
    Ok(())
}

pub const TRAJECTORY_COLUMNS: &str = "t,X,Y,Z,phi,cos_theta";

fn trajectory_rows<T: Real, W: Write + ?Sized>(
    w: &mut W,
    traj: &Trajectory<T>,
    axis: Axis,
    prefix: &str,
) -> io::Result<()> {
    for (t, s) in traj.times.iter().zip(&traj.states) {
        let p = angles_from_bloch(*s, axis);
        writeln!(
            w,
            "{prefix}{},{},{},{},{},{}",
            t.as_f64(),
            s.x.as_f64(),
            s.y.as_f64(),
            s.z.as_f64(),
            p.phi.as_f64(),
            p.cos_theta.as_f64()
        )?;
    }
    Ok(())
}

/// Columns `t,X,Y,Z,phi,cos_theta`; the angles are taken in chart `axis`.
pub fn write_trajectory_csv<T: Real, W: Write + ?Sized>(
    w: &mut W,
    header: &[String],
    traj: &Trajectory<T>,
    axis: Axis,
) -> io::Result<()> {
    write_header(w, header)?;
    writeln!(w, "{TRAJECTORY_COLUMNS}")?;
    trajectory_rows(w, traj, axis, "")
}

/// Trajectory columns preceded by the seed index. Failed seeds are listed
/// in the header.
pub fn write_portrait_csv<T: Real, W: Write + ?Sized>(
    w: &mut W,
    header: &[String],
    data: &PortraitData<T>,
) -> io::Result<()> {
    write_header(w, header)?;
    writeln!(w, "# axis: {:?}", data.axis)?;
    for (i, tr) in data.traces.iter().enumerate() {
        if let Err(e) = tr {
            writeln!(w, "# seed {i} failed: {e}")?;
        }
    }
    writeln!(w, "seed,{TRAJECTORY_COLUMNS}")?;
    for (i, tr) in data.traces.iter().enumerate() {
        if let Ok(tr) = tr {
            trajectory_rows(w, &tr.trajectory, data.axis, &format!("{i},"))?;
        }
    }
    Ok(())
}

/// Columns `t,jx,jy,jz,purity`.
pub fn write_evolve_csv<W: Write + ?Sized>(w: &mut W, header: &[String], res: &EvolveResult) -> io::Result<()> {
    write_header(w, header)?;
    writeln!(w, "# n_spins: {}", res.n_spins)?;
    for b in &res.warnings {
        writeln!(w, "# positivity breach at t={}: min eigenvalue {}", b.t, b.min_eigenvalue)?;
    }
    writeln!(w, "t,jx,jy,jz,purity")?;
    for s in &res.samples {
        writeln!(w, "{},{},{},{},{}", s.t, s.jx, s.jy, s.jz, s.purity)?;
    }
    Ok(())
}

/// Columns `re,im` in the given (sorted) order.
pub fn write_spectrum_csv<W: Write + ?Sized>(w: &mut W, header: &[String], eigenvalues: &[c64]) -> io::Result<()> {
    write_header(w, header)?;
    writeln!(w, "re,im")?;
    for z in eigenvalues {
        writeln!(w, "{},{}", z.re, z.im)?;
    }
    Ok(())
}

/// Columns `nu,score`.
pub fn write_collapse_csv<T: Real, W: Write + ?Sized>(
    w: &mut W,
    header: &[String],
    scan: &CollapseScan<T>,
) -> io::Result<()> {
    write_header(w, header)?;
    writeln!(w, "# nu_best: {}", scan.nu_best.as_f64())?;
    writeln!(w, "nu,score")?;
    for (nu, s) in &scan.scores {
        writeln!(w, "{},{}", nu.as_f64(), s.as_f64())?;
    }
    Ok(())
}

/// Columns `N,t,amplitude` for rescaling plots.
pub fn write_envelopes_csv<T: Real, W: Write + ?Sized>(
    w: &mut W,
    header: &[String],
    envelopes: &[(u32, Vec<(T, T)>)],
) -> io::Result<()> {
    write_header(w, header)?;
    writeln!(w, "N,t,amplitude")?;
    for (n, env) in envelopes {
        for (t, a) in env {
            writeln!(w, "{n},{},{}", t.as_f64(), a.as_f64())?;
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedPointRecord {
    pub location: [f64; 3],
    /// `[re, im]` pairs.
    pub eigenvalues: Vec<[f64; 2]>,
    pub class: String,
    pub residual: f64,
}

impl<T: Real> From<&FixedPoint<T>> for FixedPointRecord {
    fn from(f: &FixedPoint<T>) -> Self {
        Self {
            location: f.location.to_array().map(|v| v.as_f64()),
            eigenvalues: f
                .jacobian_eigenvalues
                .iter()
                .map(|z| [z.re.as_f64(), z.im.as_f64()])
                .collect(),
            class: f.stability.as_str().to_string(),
            residual: f.residual.as_f64(),
        }
    }
}

pub fn fixed_points_json<T: Real>(points: &[FixedPoint<T>]) -> serde_json::Value {
    let recs: Vec<FixedPointRecord> = points.iter().map(FixedPointRecord::from).collect();
    serde_json::to_value(recs).expect("plain records serialize")
}

pub fn density_matrix_json(rho: &DensityMatrix) -> serde_json::Value {
    let rec: DensityMatrixRecord = rho.to_record();
    serde_json::to_value(rec).expect("plain records serialize")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitRecord<T> {
    #[serde(flatten)]
    pub fit: FitResult<T>,
    pub digest: String,
}

pub fn fit_json<T: Real + Serialize>(fit: &FitResult<T>, digest: &str) -> serde_json::Value {
    serde_json::to_value(FitRecord {
        fit: *fit,
        digest: digest.to_string(),
    })
    .expect("plain records serialize")
}
