//! Deterministic Wavefront OBJ export.
//!
//! The writer is a pure function of the mesh: same vertices in, same
//! bytes out, on every platform. Coordinates are printed with 9
//! significant digits in the shortest fixed/scientific form (the `%.9g`
//! convention), lines end with `\n` only, and no timestamps or
//! environment data appear in the output. Files are written to a
//! sibling temp file and renamed into place, so readers never observe a
//! half-written mesh.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use crate::pencil::SurfaceMesh;

/// First line of every exported file.
pub const OBJ_HEADER: &str = "# lorentz-pencil v1";

/// Serialize a sampled patch.
///
/// Layout: header comment, `v` lines in the mesh's s-major vertex order,
/// quad `f` faces (1-based, counter-clockwise in (s, t): the corners of
/// cell (i, j) appear as (i,j) (i+1,j) (i+1,j+1) (i,j+1)), and one `l`
/// polyline tracing the shared curve along the grid row nearest `t0`
/// (`curve_row`).
pub fn obj_string(mesh: &SurfaceMesh, curve_row: usize) -> String {
    let mut out = String::new();
    out.push_str(OBJ_HEADER);
    out.push('\n');
    out.push_str(&format!("# grid {} x {}\n", mesh.n_s, mesh.n_t));
    for v in &mesh.vertices {
        out.push_str("v ");
        out.push_str(&fmt_g(v.x));
        out.push(' ');
        out.push_str(&fmt_g(v.y));
        out.push(' ');
        out.push_str(&fmt_g(v.z));
        out.push('\n');
    }
    let idx = |i: usize, j: usize| i * mesh.n_t + j + 1;
    for i in 0..mesh.n_s - 1 {
        for j in 0..mesh.n_t - 1 {
            out.push_str(&format!(
                "f {} {} {} {}\n",
                idx(i, j),
                idx(i + 1, j),
                idx(i + 1, j + 1),
                idx(i, j + 1)
            ));
        }
    }
    out.push('l');
    for i in 0..mesh.n_s {
        out.push_str(&format!(" {}", idx(i, curve_row)));
    }
    out.push('\n');
    out
}

/// Write the mesh atomically: serialize, write `<name>.tmp` next to the
/// target, then rename over it.
pub fn write_obj(mesh: &SurfaceMesh, curve_row: usize, path: &Path) -> io::Result<()> {
    let bytes = obj_string(mesh, curve_row);
    let tmp = match path.file_name() {
        Some(name) => {
            let mut n = name.to_os_string();
            n.push(".tmp");
            path.with_file_name(n)
        }
        None => {
            return Err(io::Error::new(
                io::ErrorKind::InvalidInput,
                "path has no file name",
            ))
        }
    };
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes.as_bytes())?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)
}

/// 9-significant-digit shortest form: fixed notation for decimal
/// exponents in [-4, 8], scientific (`1.5e-12`) outside, trailing zeros
/// trimmed. Zero (either sign) prints as `0`.
fn fmt_g(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{:.8e}", x);
    let (_, exp) = sci
        .split_once('e')
        .expect("{:e} always contains an exponent");
    let exp: i32 = exp.parse().expect("exponent is an integer");
    if (-4..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, x))
    } else {
        let rounded = format!("{:.8e}", x);
        let (mant, e) = rounded.split_once('e').unwrap();
        format!("{}e{}", trim_zeros(mant.to_string()), e)
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}
