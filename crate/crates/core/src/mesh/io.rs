//! Line-oriented text format for meshes.
//!
//! ```text
//! lwfv-mesh v1 dim=<d>
//! domain <lo...> <hi...>
//! cell <id> <volume> <h> <x...> <n_faces>
//! face <id> <area> <n...> <K> <L|-1> <Dsigma> <DK> <DL> <centroid...>
//! ```
//!
//! Reals are written with 17 significant digits so that reading a file back
//! reproduces every value bit for bit.

use super::{BoxDomain, Cell, Face, Mesh, MeshError};
use std::io::{BufRead, Write};

pub const MESH_HEADER: &str = "lwfv-mesh v1";

pub(crate) fn real(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_mesh<W: Write>(mesh: &Mesh, mut out: W) -> std::io::Result<()> {
    writeln!(out, "{MESH_HEADER} dim={}", mesh.dim)?;
    let coords = |v: &[f64]| v.iter().map(|&x| real(x)).collect::<Vec<_>>().join(" ");
    writeln!(out, "domain {} {}", coords(&mesh.domain.lo), coords(&mesh.domain.hi))?;
    for c in &mesh.cells {
        writeln!(
            out,
            "cell {} {} {} {} {}",
            c.id,
            real(c.volume),
            real(c.diameter),
            coords(&c.anchor),
            c.n_faces()
        )?;
    }
    for f in &mesh.faces {
        let outer = f.outer.map_or(-1, |l| l as i64);
        writeln!(
            out,
            "face {} {} {} {} {} {} {} {} {}",
            f.id,
            real(f.area),
            coords(&f.normal),
            f.inner,
            outer,
            real(f.dual_volume),
            real(f.dual_inner),
            real(f.dual_outer),
            coords(&f.centroid)
        )?;
    }
    Ok(())
}

struct Fields<'a> {
    line: usize,
    it: std::str::SplitWhitespace<'a>,
}

impl<'a> Fields<'a> {
    fn err(&self, message: impl Into<String>) -> MeshError {
        MeshError::Parse {
            line: self.line,
            message: message.into(),
        }
    }

    fn next(&mut self, what: &str) -> Result<&'a str, MeshError> {
        let line = self.line;
        self.it.next().ok_or_else(|| MeshError::Parse {
            line,
            message: format!("missing {what}"),
        })
    }

    fn real(&mut self, what: &str) -> Result<f64, MeshError> {
        let tok = self.next(what)?;
        tok.parse()
            .map_err(|_| self.err(format!("bad {what} `{tok}`")))
    }

    fn index(&mut self, what: &str) -> Result<i64, MeshError> {
        let tok = self.next(what)?;
        tok.parse()
            .map_err(|_| self.err(format!("bad {what} `{tok}`")))
    }

    fn reals(&mut self, n: usize, what: &str) -> Result<Vec<f64>, MeshError> {
        (0..n).map(|_| self.real(what)).collect()
    }

    fn finish(mut self) -> Result<(), MeshError> {
        match self.it.next() {
            Some(extra) => Err(self.err(format!("unexpected trailing `{extra}`"))),
            None => Ok(()),
        }
    }
}

pub fn read_mesh<R: BufRead>(input: R) -> Result<Mesh, MeshError> {
    let mut dim = None;
    let mut domain = None;
    let mut cells = Vec::new();
    let mut declared_faces = Vec::new();
    let mut faces = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if dim.is_none() {
            let rest = trimmed.strip_prefix(MESH_HEADER).ok_or(MeshError::Parse {
                line: lineno,
                message: format!("expected header `{MESH_HEADER} dim=<d>`"),
            })?;
            let d: usize = rest
                .trim()
                .strip_prefix("dim=")
                .and_then(|d| d.parse().ok())
                .filter(|&d| d >= 1)
                .ok_or(MeshError::Parse {
                    line: lineno,
                    message: "bad dim".into(),
                })?;
            dim = Some(d);
            continue;
        }
        let d = dim.unwrap_or(1);
        let mut f = Fields {
            line: lineno,
            it: trimmed.split_whitespace(),
        };
        match f.next("record")? {
            "domain" => {
                let lo = f.reals(d, "domain lower corner")?;
                let hi = f.reals(d, "domain upper corner")?;
                f.finish()?;
                domain = Some(BoxDomain::new(lo, hi)?);
            }
            "cell" => {
                let id = f.index("cell id")?;
                if id != cells.len() as i64 {
                    return Err(f.err(format!("cell id {id} out of sequence")));
                }
                let volume = f.real("volume")?;
                let diameter = f.real("diameter")?;
                let anchor = f.reals(d, "anchor")?;
                let n_faces = f.index("face count")?;
                f.finish()?;
                declared_faces.push(n_faces);
                cells.push(Cell {
                    id: id as usize,
                    volume,
                    diameter,
                    anchor,
                    faces: Vec::new(),
                });
            }
            "face" => {
                let id = f.index("face id")?;
                if id != faces.len() as i64 {
                    return Err(f.err(format!("face id {id} out of sequence")));
                }
                let area = f.real("area")?;
                let normal = f.reals(d, "normal")?;
                let inner = f.index("inner cell")?;
                let outer = f.index("outer cell")?;
                let dual_volume = f.real("dual volume")?;
                let dual_inner = f.real("inner dual part")?;
                let dual_outer = f.real("outer dual part")?;
                let centroid = f.reals(d, "centroid")?;
                if inner < 0 || outer < -1 {
                    return Err(f.err("negative cell index"));
                }
                f.finish()?;
                faces.push(Face {
                    id: id as usize,
                    area,
                    normal,
                    inner: inner as usize,
                    outer: (outer >= 0).then_some(outer as usize),
                    dual_volume,
                    dual_inner,
                    dual_outer,
                    centroid,
                });
            }
            other => return Err(f.err(format!("unknown record `{other}`"))),
        }
    }
    let d = dim.ok_or(MeshError::Parse {
        line: 0,
        message: "empty mesh file".into(),
    })?;
    let domain = domain.ok_or(MeshError::Parse {
        line: 0,
        message: "missing domain record".into(),
    })?;
    if domain.dim() != d {
        return Err(MeshError::Parse {
            line: 0,
            message: "domain dimension differs from header".into(),
        });
    }
    if let Some(f) = faces
        .iter()
        .find(|f| f.inner >= cells.len() || f.outer.is_some_and(|l| l >= cells.len()))
    {
        return Err(MeshError::Parse {
            line: 0,
            message: format!("face {} references a missing cell", f.id),
        });
    }
    let mesh = Mesh::from_parts(domain, cells, faces);
    for (c, &n) in mesh.cells.iter().zip(&declared_faces) {
        if c.n_faces() as i64 != n {
            return Err(MeshError::Parse {
                line: 0,
                message: format!("cell {} declares {n} faces but {} reference it", c.id, c.n_faces()),
            });
        }
    }
    Ok(mesh)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{build_perturbed_triangular_2d, build_uniform_1d};

    fn round_trip(mesh: &Mesh) -> (String, Mesh) {
        let mut buf = Vec::new();
        write_mesh(mesh, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let back = read_mesh(text.as_bytes()).unwrap();
        (text, back)
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let meshes = [
            build_uniform_1d(10, (0.0, 1.0)).unwrap(),
            build_perturbed_triangular_2d(5, &BoxDomain::unit(2), 0.3, 42).unwrap(),
        ];
        for mesh in &meshes {
            let (text, back) = round_trip(mesh);
            assert_eq!(&back, mesh);
            let (text2, _) = round_trip(&back);
            assert_eq!(text, text2);
        }
    }

    #[test]
    fn header_is_versioned() {
        let (text, _) = round_trip(&build_uniform_1d(3, (0.0, 1.0)).unwrap());
        assert!(text.starts_with("lwfv-mesh v1 dim=1\n"));
        assert!(text.contains("\nface 0 1.0000000000000000e0 -1.0000000000000000e0 0 -1 "));
    }

    #[test]
    fn malformed_input_reports_line() {
        let bad = "lwfv-mesh v1 dim=1\ndomain 0 1\ncell 0 0.5 0.5 0.25\n";
        match read_mesh(bad.as_bytes()) {
            Err(MeshError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(read_mesh("lwfv-mesh v2 dim=1\n".as_bytes()).is_err());
    }
}
