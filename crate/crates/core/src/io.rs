//! CSV and JSON file formats.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::SpherePoint;
use crate::oracles::{OracleCurve, OracleKind};
use crate::pcf::{ComparisonRow, PcfEstimate, SGrid};

fn coord_header(dim: usize) -> Vec<String> {
    if dim == 3 {
        vec!["x".into(), "y".into(), "z".into()]
    } else {
        (0..dim).map(|i| format!("x{i}")).collect()
    }
}

/// Writes point sets; a `rep` column is added when there is more than one.
pub fn write_points<W: Write>(out: W, replicates: &[Vec<SpherePoint>]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let dim = replicates
        .iter()
        .flat_map(|r| r.first())
        .map(|p| p.coords().len())
        .next()
        .unwrap_or(3);
    let with_rep = replicates.len() > 1;
    let mut header = coord_header(dim);
    if with_rep {
        header.insert(0, "rep".into());
    }
    w.write_record(&header)?;
    for (rep, points) in replicates.iter().enumerate() {
        for p in points {
            let mut row: Vec<String> = p.coords().iter().map(|c| c.to_string()).collect();
            if with_rep {
                row.insert(0, rep.to_string());
            }
            w.write_record(&row)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Reads point sets written by [`write_points`], grouped by `rep`.
pub fn read_points<R: Read>(input: R) -> Result<Vec<Vec<SpherePoint>>> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers()?.clone();
    let rep_col = header.iter().position(|h| h == "rep");
    let coord_cols: Vec<usize> = (0..header.len()).filter(|&i| Some(i) != rep_col).collect();
    if coord_cols.len() < 2 {
        return Err(Error::Parse("point file needs at least two coordinate columns".into()));
    }
    let mut groups: BTreeMap<u64, Vec<SpherePoint>> = BTreeMap::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        let parse = |i: usize| {
            rec.get(i)
                .unwrap_or("")
                .trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("row {}: bad number in column {i}", line + 2)))
        };
        let rep = match rep_col {
            Some(c) => parse(c)? as u64,
            None => 0,
        };
        let coords = coord_cols.iter().map(|&i| parse(i)).collect::<Result<Vec<_>>>()?;
        let point = SpherePoint::normalized(coords)
            .map_err(|e| Error::Parse(format!("row {}: {e}", line + 2)))?;
        groups.entry(rep).or_default().push(point);
    }
    if groups.is_empty() {
        return Err(Error::Parse("point file has no rows".into()));
    }
    Ok(groups.into_values().collect())
}

pub fn write_estimates<W: Write>(out: W, rows: &[PcfEstimate]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_estimates<R: Read>(input: R) -> Result<Vec<PcfEstimate>> {
    let rows = csv::Reader::from_reader(input)
        .deserialize()
        .collect::<std::result::Result<Vec<PcfEstimate>, _>>()?;
    if rows.is_empty() {
        return Err(Error::Parse("estimate file has no rows".into()));
    }
    Ok(rows)
}

#[derive(Debug, Serialize, Deserialize)]
struct OracleRow {
    s: f64,
    value: f64,
    kind: OracleKind,
    params: String,
}

pub fn write_oracle<W: Write>(out: W, curve: &OracleCurve) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for (&s, &value) in curve.s_values.values().iter().zip(&curve.values) {
        w.serialize(OracleRow {
            s,
            value,
            kind: curve.kind,
            params: curve.params.clone(),
        })?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_oracle<R: Read>(input: R) -> Result<OracleCurve> {
    let rows = csv::Reader::from_reader(input)
        .deserialize()
        .collect::<std::result::Result<Vec<OracleRow>, _>>()?;
    let first = rows
        .first()
        .ok_or_else(|| Error::Parse("oracle file has no rows".into()))?;
    let (kind, params) = (first.kind, first.params.clone());
    Ok(OracleCurve {
        s_values: SGrid::new(rows.iter().map(|r| r.s).collect())?,
        values: rows.iter().map(|r| r.value).collect(),
        kind,
        params,
    })
}

pub fn write_comparison<W: Write>(out: W, rows: &[ComparisonRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}
