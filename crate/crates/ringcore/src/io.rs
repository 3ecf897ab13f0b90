//! File formats: CSV point tables, graph edge lists, tuple and curve JSON,
//! constraint files, and canonical JSON output.
//!
//! Floats in canonical JSON are printed with 17 significant digits so that
//! identical runs produce byte-identical files and values round-trip exactly.

use crate::composer::CoresetResult;
use crate::error::{Error, Result};
use crate::metric::{CurveSpace, EuclideanSpace, GraphMetric, MetricBackend, PointId, TupleSpace};
use crate::transport::TransportPlan;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::Path;

struct SigFigFormatter;

impl serde_json::ser::Formatter for SigFigFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        write!(writer, "{value:.16e}")
    }
}

/// Canonical JSON: stable field order (struct order), floats at 17
/// significant digits.
pub fn to_canonical_json<T: Serialize>(value: &T) -> Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SigFigFormatter);
    value
        .serialize(&mut ser)
        .map_err(|e| Error::Config(format!("serialization failed: {e}")))?;
    String::from_utf8(out).map_err(|e| Error::Config(format!("non-utf8 json: {e}")))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut s = to_canonical_json(value)?;
    s.push('\n');
    std::fs::write(path, s)?;
    Ok(())
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Parse {
        line: e.line(),
        col: e.column(),
        msg: e.to_string(),
    })
}

/// Coordinates, per-point weights, and group labels when the file has them.
pub type PointsTable = (EuclideanSpace, Vec<f64>, Option<Vec<Vec<String>>>);

/// Euclidean CSV: header row `x1..xd[,weight][,groups]`, one point per row;
/// `groups` is a `;`-separated label list.
pub fn load_points_csv(path: &Path) -> Result<PointsTable> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(csv_err)?;
    let headers = reader.headers().map_err(csv_err)?.clone();
    let mut dim = 0usize;
    for (i, h) in headers.iter().enumerate() {
        let expect = format!("x{}", i + 1);
        if h == expect {
            dim = i + 1;
        } else {
            break;
        }
    }
    if dim == 0 {
        return Err(Error::Parse {
            line: 1,
            col: 1,
            msg: format!(
                "header must start with x1..xd, got {:?}",
                headers.iter().next().unwrap_or("")
            ),
        });
    }
    let weight_col = headers.iter().position(|h| h == "weight");
    let groups_col = headers.iter().position(|h| h == "groups");

    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut weights: Vec<f64> = Vec::new();
    let mut labels: Vec<Vec<String>> = Vec::new();
    for (ridx, record) in reader.records().enumerate() {
        let record = record.map_err(csv_err)?;
        let line = ridx + 2; // + header
        let mut row = Vec::with_capacity(dim);
        for c in 0..dim {
            let field = record.get(c).ok_or(Error::Parse {
                line,
                col: c + 1,
                msg: "missing coordinate".into(),
            })?;
            row.push(field.parse::<f64>().map_err(|e| Error::Parse {
                line,
                col: c + 1,
                msg: format!("bad coordinate {field:?}: {e}"),
            })?);
        }
        rows.push(row);
        let w = match weight_col {
            Some(c) => {
                let field = record.get(c).unwrap_or("");
                if field.is_empty() {
                    1.0
                } else {
                    field.parse::<f64>().map_err(|e| Error::Parse {
                        line,
                        col: c + 1,
                        msg: format!("bad weight {field:?}: {e}"),
                    })?
                }
            }
            None => 1.0,
        };
        weights.push(w);
        let l = match groups_col {
            Some(c) => {
                let field = record.get(c).unwrap_or("");
                if field.is_empty() {
                    Vec::new()
                } else {
                    field.split(';').map(|s| s.trim().to_string()).collect()
                }
            }
            None => Vec::new(),
        };
        labels.push(l);
    }
    if rows.is_empty() {
        return Err(Error::Parse {
            line: 2,
            col: 1,
            msg: "no data rows".into(),
        });
    }
    let space = EuclideanSpace::from_rows(dim, &rows)?;
    let labels = if groups_col.is_some() { Some(labels) } else { None };
    Ok((space, weights, labels))
}

fn csv_err(e: csv::Error) -> Error {
    let line = e
        .position()
        .map(|p| p.line() as usize)
        .unwrap_or(0);
    Error::Parse {
        line,
        col: 1,
        msg: e.to_string(),
    }
}

/// Edge-list text: lines `u v w` (whitespace separated, `#` comments); the
/// companion points file lists one vertex id per line with an optional
/// weight column.
pub fn load_graph(
    edges_path: &Path,
    points_path: &Path,
    cache_cap: usize,
) -> Result<(GraphMetric, Vec<PointId>, Vec<f64>)> {
    let text = std::fs::read_to_string(edges_path)?;
    let mut edges: Vec<(usize, usize, f64)> = Vec::new();
    let mut max_vertex = 0usize;
    for (lno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(Error::Parse {
                line: lno + 1,
                col: 1,
                msg: format!("expected `u v w`, got {line:?}"),
            });
        }
        let parse_id = |s: &str, col: usize| -> Result<usize> {
            s.parse::<usize>().map_err(|e| Error::Parse {
                line: lno + 1,
                col,
                msg: format!("bad vertex id {s:?}: {e}"),
            })
        };
        let u = parse_id(fields[0], 1)?;
        let v = parse_id(fields[1], 2)?;
        let w = fields[2].parse::<f64>().map_err(|e| Error::Parse {
            line: lno + 1,
            col: 3,
            msg: format!("bad weight {:?}: {e}", fields[2]),
        })?;
        max_vertex = max_vertex.max(u).max(v);
        edges.push((u, v, w));
    }
    if edges.is_empty() {
        return Err(Error::Parse {
            line: 1,
            col: 1,
            msg: "no edges".into(),
        });
    }

    let text = std::fs::read_to_string(points_path)?;
    let mut points: Vec<PointId> = Vec::new();
    let mut weights: Vec<f64> = Vec::new();
    for (lno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let id = fields[0].parse::<usize>().map_err(|e| Error::Parse {
            line: lno + 1,
            col: 1,
            msg: format!("bad vertex id {:?}: {e}", fields[0]),
        })?;
        let w = if fields.len() > 1 {
            fields[1].parse::<f64>().map_err(|e| Error::Parse {
                line: lno + 1,
                col: 2,
                msg: format!("bad weight {:?}: {e}", fields[1]),
            })?
        } else {
            1.0
        };
        max_vertex = max_vertex.max(id);
        points.push(PointId(id));
        weights.push(w);
    }
    if points.is_empty() {
        return Err(Error::Parse {
            line: 1,
            col: 1,
            msg: "no data vertices".into(),
        });
    }
    let graph = GraphMetric::from_edges(max_vertex + 1, &edges, cache_cap)?;
    graph.check_connected(&points.iter().map(|p| p.0).collect::<Vec<_>>())?;
    Ok((graph, points, weights))
}

/// Tuple JSON: array of tuples, each an array of `l` d-vectors.
pub fn load_tuples_json(path: &Path, l: Option<usize>, p: f64) -> Result<TupleSpace> {
    let tuples: Vec<Vec<Vec<f64>>> = read_json(path)?;
    if tuples.is_empty() {
        return Err(Error::Parse {
            line: 1,
            col: 1,
            msg: "no tuples".into(),
        });
    }
    let tuple_len = l.unwrap_or(tuples[0].len());
    let dim = tuples[0].first().map(Vec::len).unwrap_or(0);
    if dim == 0 {
        return Err(Error::Parse {
            line: 1,
            col: 1,
            msg: "empty vectors inside tuple".into(),
        });
    }
    TupleSpace::from_tuples(tuple_len, dim, p, &tuples)
}

/// Curve JSON: array of polylines, each an array of d-vectors of length at
/// most `m_cap` when given.
pub fn load_curves_json(path: &Path, m_cap: Option<usize>) -> Result<CurveSpace> {
    let curves: Vec<Vec<Vec<f64>>> = read_json(path)?;
    if curves.is_empty() {
        return Err(Error::Parse {
            line: 1,
            col: 1,
            msg: "no curves".into(),
        });
    }
    if let Some(cap) = m_cap {
        for (i, c) in curves.iter().enumerate() {
            if c.len() > cap {
                return Err(Error::Parse {
                    line: i + 1,
                    col: 1,
                    msg: format!("polyline has {} vertices, cap is {cap}", c.len()),
                });
            }
        }
    }
    let dim = curves[0].first().map(Vec::len).unwrap_or(0);
    if dim == 0 {
        return Err(Error::Parse {
            line: 1,
            col: 1,
            msg: "empty vectors inside curve".into(),
        });
    }
    CurveSpace::from_curves(dim, &curves)
}

/// Constraint file: `{"centers": [...], "masses": [...]}`.
#[derive(Debug, Serialize, Deserialize)]
pub struct ConstraintFile {
    pub centers: Vec<usize>,
    pub masses: Vec<f64>,
}

pub fn load_constraint_json(path: &Path) -> Result<ConstraintFile> {
    let file: ConstraintFile = read_json(path)?;
    if file.centers.len() != file.masses.len() {
        return Err(Error::Config(format!(
            "{} centers but {} masses",
            file.centers.len(),
            file.masses.len()
        )));
    }
    Ok(file)
}

/// Plan export: CSV triples `point,center,mass`.
pub fn write_plan_csv(path: &Path, plan: &TransportPlan) -> Result<()> {
    let mut out = std::fs::File::create(path)?;
    writeln!(out, "point,center,mass")?;
    for e in &plan.entries {
        writeln!(out, "{},{},{:.16e}", e.point, e.center, e.mass)?;
    }
    Ok(())
}

/// Lossy CSV mirror of a coreset: `index,weight,provenance[,x1..xd]`.
pub fn write_coreset_csv(
    path: &Path,
    coreset: &CoresetResult,
    backend: &MetricBackend,
) -> Result<()> {
    let dim = match backend {
        MetricBackend::Euclidean(s) => s.dim(),
        _ => 0,
    };
    let mut out = std::fs::File::create(path)?;
    write!(out, "index,weight,provenance")?;
    for d in 0..dim {
        write!(out, ",x{}", d + 1)?;
    }
    writeln!(out)?;
    for i in 0..coreset.size {
        let tag = match coreset.provenance[i] {
            crate::composer::Provenance::TwoPoint => "two_point",
            crate::composer::Provenance::RingSample => "ring_sample",
            crate::composer::Provenance::CenterMass => "center_mass",
        };
        write!(
            out,
            "{},{:.16e},{}",
            coreset.points[i].0, coreset.weights[i], tag
        )?;
        if let Some(coords) = backend.coords(coreset.points[i]) {
            for x in coords {
                write!(out, ",{x:.16e}")?;
            }
        }
        writeln!(out)?;
    }
    Ok(())
}
