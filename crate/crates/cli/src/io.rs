//! Database files: a directory with one `<label>.csv` per relation, or a
//! single JSON document with the same content.
//!
//! Header cells name the schema: `[A]` is an interval column, `A` a numeric
//! point column and `A:bits` a bitstring point column. Open interval ends
//! such as `(1,4]` are closed on load with one shared epsilon.

use std::fs;
use std::path::{Path, PathBuf};

use ijoin::interval::{close_all, RawInterval};
use ijoin::{Bitstring, Database, Rational, Relation, Value, VarKind, Variable};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    CsvDir,
    Json,
}

impl Format {
    pub fn of(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => Format::Json,
            _ => Format::CsvDir,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Column {
    var: Variable,
    bits: bool,
}

fn valid_name(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_alphabetic()) && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn parse_header(cell: &str) -> Result<Column, String> {
    let t = cell.trim();
    let (var, bits) = if let Some(inner) = t.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
        (Variable::interval(inner.trim()), false)
    } else if let Some(name) = t.strip_suffix(":bits") {
        (Variable::point(name.trim()), true)
    } else {
        (Variable::point(t), false)
    };
    if !valid_name(&var.name) {
        return Err(format!("bad column header `{cell}`"));
    }
    Ok(Column { var, bits })
}

fn header_cell(var: &Variable, bits: bool) -> String {
    match (var.kind, bits) {
        (VarKind::Interval, _) => format!("[{}]", var.name),
        (VarKind::Point, true) => format!("{}:bits", var.name),
        (VarKind::Point, false) => var.name.clone(),
    }
}

/// Splits on commas outside brackets, so `[1,4],3` gives two cells.
pub fn split_cells(line: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in line.char_indices() {
        match c {
            '[' | '(' => depth += 1,
            ']' | ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&line[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&line[start..]);
    out
}

enum Cell {
    Ready(Value),
    /// Index into the raw intervals awaiting a shared epsilon.
    Raw(usize),
}

/// Relations under construction; intervals are resolved together at the end.
#[derive(Default)]
struct Builder {
    relations: Vec<(String, Vec<Column>, Vec<Vec<Cell>>)>,
    raws: Vec<RawInterval>,
}

impl Builder {
    fn cell(&mut self, col: &Column, text: &str) -> Result<Cell, String> {
        let bad = |e: ijoin::Error| format!("column `{}`: {e}", col.var.name);
        Ok(match (col.var.kind, col.bits) {
            (VarKind::Interval, _) => {
                self.raws.push(text.parse::<RawInterval>().map_err(bad)?);
                Cell::Raw(self.raws.len() - 1)
            }
            (VarKind::Point, true) => Cell::Ready(Value::Bits(text.parse::<Bitstring>().map_err(bad)?)),
            (VarKind::Point, false) => Cell::Ready(Value::num(text.parse::<Rational>().map_err(bad)?)),
        })
    }

    fn finish(self) -> CliResult<Database> {
        let closed = close_all(&self.raws);
        let mut db = Database::new();
        for (name, cols, rows) in self.relations {
            let schema: Vec<Variable> = cols.into_iter().map(|c| c.var).collect();
            let mut rel = Relation::new(name, schema);
            rel.reserve(rows.len());
            for row in rows {
                rel.try_push(
                    row.into_iter()
                        .map(|c| match c {
                            Cell::Ready(v) => v,
                            Cell::Raw(i) => Value::interval(closed[i].clone()),
                        })
                        .collect(),
                )?;
            }
            db.insert(rel);
        }
        Ok(db)
    }
}

fn check_unique(path: &Path, cols: &[Column]) -> CliResult<()> {
    for (i, c) in cols.iter().enumerate() {
        if cols[..i].iter().any(|d| d.var.name == c.var.name) {
            return Err(CliError::parse(path, 1, format!("duplicate column `{}`", c.var.name)));
        }
    }
    Ok(())
}

fn read_csv(b: &mut Builder, path: &Path, name: String, text: &str) -> CliResult<()> {
    let mut lines: Vec<&str> = text.split('\n').map(|l| l.strip_suffix('\r').unwrap_or(l)).collect();
    if lines.last() == Some(&"") {
        lines.pop();
    }
    let Some((head, body)) = lines.split_first() else {
        return Err(CliError::parse(path, 1, "missing header row"));
    };
    let cols = split_cells(head)
        .into_iter()
        .map(parse_header)
        .collect::<Result<Vec<_>, _>>()
        .map_err(|m| CliError::parse(path, 1, m))?;
    check_unique(path, &cols)?;
    let mut rows = Vec::with_capacity(body.len());
    for (i, line) in body.iter().enumerate() {
        let cells = split_cells(line);
        if cells.len() != cols.len() {
            return Err(CliError::parse(path, i + 2, format!("expected {} cells, found {}", cols.len(), cells.len())));
        }
        let row = cols
            .iter()
            .zip(cells)
            .map(|(c, t)| b.cell(c, t))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|m| CliError::parse(path, i + 2, m))?;
        rows.push(row);
    }
    b.relations.push((name, cols, rows));
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct JsonDb {
    relations: std::collections::BTreeMap<String, JsonRelation>,
}

#[derive(Serialize, Deserialize)]
struct JsonRelation {
    schema: Vec<String>,
    rows: Vec<Vec<serde_json::Value>>,
}

fn read_json(b: &mut Builder, path: &Path, text: &str) -> CliResult<()> {
    let doc: JsonDb = serde_json::from_str(text).map_err(|e| CliError::parse(path, e.line(), e.to_string()))?;
    for (name, r) in doc.relations {
        let at = |m: String| CliError::parse(path, 0, format!("relation `{name}`: {m}"));
        let cols = r.schema.iter().map(|s| parse_header(s)).collect::<Result<Vec<_>, _>>().map_err(at)?;
        check_unique(path, &cols)?;
        let mut rows = Vec::with_capacity(r.rows.len());
        for (i, row) in r.rows.iter().enumerate() {
            if row.len() != cols.len() {
                return Err(at(format!("row {i} has {} cells, expected {}", row.len(), cols.len())));
            }
            let mut out = Vec::with_capacity(row.len());
            for (c, v) in cols.iter().zip(row) {
                let text = match v {
                    serde_json::Value::String(s) => s.clone(),
                    serde_json::Value::Number(n) => n.to_string(),
                    other => return Err(at(format!("row {i}: unsupported cell {other}"))),
                };
                out.push(b.cell(c, &text).map_err(|m| at(format!("row {i}: {m}")))?);
            }
            rows.push(out);
        }
        b.relations.push((name, cols, rows));
    }
    Ok(())
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

/// `.csv` files of a database directory, sorted by name.
pub fn csv_files(dir: &Path) -> CliResult<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| CliError::io(dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|e| e == "csv"))
        .collect();
    files.sort();
    Ok(files)
}

pub fn load_database(path: &Path) -> CliResult<Database> {
    let mut b = Builder::default();
    match Format::of(path) {
        Format::Json => read_json(&mut b, path, &read(path)?)?,
        Format::CsvDir => {
            for f in csv_files(path)? {
                let name = f.file_stem().and_then(|s| s.to_str()).unwrap_or_default().to_string();
                read_csv(&mut b, &f, name, &read(&f)?)?;
            }
        }
    }
    b.finish()
}

fn header_of(rel: &Relation) -> Vec<String> {
    rel.schema.iter().zip(rel.bit_columns()).map(|(v, bits)| header_cell(v, bits)).collect()
}

pub fn relation_csv(rel: &Relation) -> String {
    let mut out = header_of(rel).join(",");
    out.push('\n');
    for row in rel.rows() {
        let cells: Vec<String> = row.iter().map(Value::to_string).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn database_json(db: &Database) -> String {
    let doc = JsonDb {
        relations: db
            .relations
            .iter()
            .map(|(name, rel)| {
                let rows =
                    rel.rows().map(|r| r.iter().map(|v| serde_json::Value::String(v.to_string())).collect()).collect();
                (name.clone(), JsonRelation { schema: header_of(rel), rows })
            })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("database serializes");
    s.push('\n');
    s
}

fn write(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// Writes `db` in the format implied by `path`. Loading a canonical input
/// and saving it reproduces the same bytes.
pub fn save_database(db: &Database, path: &Path) -> CliResult<()> {
    match Format::of(path) {
        Format::Json => write(path, &database_json(db)),
        Format::CsvDir => {
            fs::create_dir_all(path).map_err(|e| CliError::io(path, e))?;
            for (name, rel) in &db.relations {
                write(&path.join(format!("{name}.csv")), &relation_csv(rel))?;
            }
            Ok(())
        }
    }
}
