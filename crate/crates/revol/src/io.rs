//! CSV formats: price input, numeric tables and volatility series.
//!
//! Every file is written to a temporary sibling and renamed into place.

use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use revol_core::series::{PriceRecord, PriceSeries, Stage, VolPoint, VolatilitySeries};
use thiserror::Error;

/// Failures while reading or writing files.
#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: file not found")]
    Missing { path: PathBuf },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}:{line}: {message}")]
    Parse { path: PathBuf, line: u64, message: String },
    #[error("{path}:{line}: non-positive price")]
    NonPositivePrice { path: PathBuf, line: u64 },
    #[error("{path}:{line}: record is out of (day, slot) order")]
    UnsortedInput { path: PathBuf, line: u64 },
    #[error("{path}:{line}: duplicate (day, slot)")]
    DuplicateRecord { path: PathBuf, line: u64 },
    #[error("{path}:{line}: slot {slot} outside 0..{slots_per_day}")]
    SlotOutOfRange { path: PathBuf, line: u64, slot: u32, slots_per_day: u32 },
    #[error("{path}: {message}")]
    Schema { path: PathBuf, message: String },
    #[error("{path}: rows have different lengths")]
    Arity { path: PathBuf },
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> IoError + '_ {
    move |source| IoError::Io { path: path.to_path_buf(), source }
}

fn csv_err(path: &Path, e: csv::Error) -> IoError {
    let line = e.position().map_or(0, |p| p.line());
    match e.into_kind() {
        csv::ErrorKind::Io(source) => IoError::Io { path: path.to_path_buf(), source },
        other => IoError::Parse { path: path.to_path_buf(), line, message: format!("{other:?}") },
    }
}

/// A column picked by zero-based position or by header name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColumnRef {
    Index(usize),
    Name(String),
}

impl std::str::FromStr for ColumnRef {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(s.parse::<usize>().map_or_else(|_| ColumnRef::Name(s.to_string()), ColumnRef::Index))
    }
}

/// Which columns hold day, slot and price.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnSchema {
    pub day: ColumnRef,
    pub slot: ColumnRef,
    pub price: ColumnRef,
}

impl Default for ColumnSchema {
    fn default() -> Self {
        Self { day: ColumnRef::Index(0), slot: ColumnRef::Index(1), price: ColumnRef::Index(2) }
    }
}

fn open(path: &Path) -> Result<File, IoError> {
    File::open(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => IoError::Missing { path: path.to_path_buf() },
        _ => IoError::Io { path: path.to_path_buf(), source: e },
    })
}

/// Load `day,slot,price` records.
///
/// A first row whose day field is not an integer is taken as a header.
/// Rows must already be in (day, slot) order; nothing is reordered.
pub fn load_price_csv(path: &Path, schema: &ColumnSchema, slots_per_day: u32) -> Result<PriceSeries, IoError> {
    if slots_per_day == 0 {
        return Err(IoError::Schema { path: path.to_path_buf(), message: "slots per day must be positive".into() });
    }
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(BufReader::new(open(path)?));
    let mut header: Option<csv::StringRecord> = None;
    let mut records: Vec<PriceRecord> = Vec::new();
    let mut first = true;
    for row in reader.records() {
        let row = row.map_err(|e| csv_err(path, e))?;
        let line = row.position().map_or(0, |p| p.line());
        if row.iter().all(str::is_empty) {
            continue;
        }
        let index_of = |c: &ColumnRef, header: &Option<csv::StringRecord>| -> Result<usize, IoError> {
            match c {
                ColumnRef::Index(i) => Ok(*i),
                ColumnRef::Name(n) => header
                    .as_ref()
                    .and_then(|h| h.iter().position(|f| f == n))
                    .ok_or_else(|| IoError::Schema { path: path.to_path_buf(), message: format!("no column named {n:?}") }),
            }
        };
        if first {
            first = false;
            let day_col = match &schema.day {
                ColumnRef::Index(i) => *i,
                ColumnRef::Name(_) => usize::MAX,
            };
            let looks_numeric = row.get(day_col).is_some_and(|f| f.parse::<u32>().is_ok());
            if !looks_numeric {
                header = Some(row);
                continue;
            }
        }
        let field = |c: &ColumnRef, what: &str| -> Result<String, IoError> {
            let i = index_of(c, &header)?;
            row.get(i).map(str::to_string).ok_or_else(|| IoError::Parse {
                path: path.to_path_buf(),
                line,
                message: format!("missing {what} column {i}"),
            })
        };
        let parse_err = |what: &str, v: &str| IoError::Parse { path: path.to_path_buf(), line, message: format!("bad {what} {v:?}") };
        let day_s = field(&schema.day, "day")?;
        let slot_s = field(&schema.slot, "slot")?;
        let price_s = field(&schema.price, "price")?;
        let day: u32 = day_s.parse().map_err(|_| parse_err("day", &day_s))?;
        let slot: u32 = slot_s.parse().map_err(|_| parse_err("slot", &slot_s))?;
        let price: f64 = price_s.parse().map_err(|_| parse_err("price", &price_s))?;
        if !price.is_finite() {
            return Err(parse_err("price", &price_s));
        }
        if price <= 0.0 {
            return Err(IoError::NonPositivePrice { path: path.to_path_buf(), line });
        }
        if slot >= slots_per_day {
            return Err(IoError::SlotOutOfRange { path: path.to_path_buf(), line, slot, slots_per_day });
        }
        if let Some(prev) = records.last() {
            match (prev.day, prev.slot).cmp(&(day, slot)) {
                std::cmp::Ordering::Equal => return Err(IoError::DuplicateRecord { path: path.to_path_buf(), line }),
                std::cmp::Ordering::Greater => return Err(IoError::UnsortedInput { path: path.to_path_buf(), line }),
                std::cmp::Ordering::Less => {}
            }
        }
        records.push(PriceRecord { day, slot, price });
    }
    PriceSeries::new(records, slots_per_day)
        .map_err(|e| IoError::Schema { path: path.to_path_buf(), message: e.to_string() })
}

/// One table cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Int(i64),
    Real(f64),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Real)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v as i64)
    }
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            // Shortest representation that parses back to the same f64.
            Cell::Real(v) => format!("{v}"),
            Cell::Empty => String::new(),
        }
    }
}

/// Write `bytes` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), IoError> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir).map_err(io_err(dir))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err(dir))?;
    tmp.write_all(bytes).map_err(io_err(path))?;
    tmp.as_file().sync_all().map_err(io_err(path))?;
    tmp.persist(path).map_err(|e| IoError::Io { path: path.to_path_buf(), source: e.error })?;
    Ok(())
}

/// Write a CSV with a header row.
pub fn write_table(path: &Path, header: &[&str], rows: &[Vec<Cell>]) -> Result<(), IoError> {
    if rows.iter().any(|r| r.len() != header.len()) {
        return Err(IoError::Arity { path: path.to_path_buf() });
    }
    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    w.write_record(header).map_err(|e| csv_err(path, e))?;
    for row in rows {
        w.write_record(row.iter().map(Cell::render)).map_err(|e| csv_err(path, e))?;
    }
    let bytes = w.into_inner().map_err(|e| IoError::Io { path: path.to_path_buf(), source: e.into_error() })?;
    write_atomic(path, &bytes)
}

/// A numeric table read back from CSV; empty cells are `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
}

impl Table {
    /// Values of the named column.
    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let i = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }
}

/// Read a table written by [`write_table`].
pub fn read_table(path: &Path) -> Result<Table, IoError> {
    let mut reader = csv::ReaderBuilder::new().from_reader(BufReader::new(open(path)?));
    let header: Vec<String> = reader.headers().map_err(|e| csv_err(path, e))?.iter().map(String::from).collect();
    let mut rows = Vec::new();
    for row in reader.records() {
        let row = row.map_err(|e| csv_err(path, e))?;
        let line = row.position().map_or(0, |p| p.line());
        let cells = row
            .iter()
            .map(|f| {
                if f.is_empty() {
                    Ok(None)
                } else {
                    f.parse::<f64>().map(Some).map_err(|_| IoError::Parse {
                        path: path.to_path_buf(),
                        line,
                        message: format!("bad number {f:?}"),
                    })
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(cells);
    }
    Ok(Table { header, rows })
}

/// Column names of the volatility CSV.
pub const VOLATILITY_HEADER: [&str; 5] = ["day", "slot", "omega", "omega_deseasonalized", "v"];

/// Write the three volatility stages side by side.
pub fn write_volatility(path: &Path, raw: &VolatilitySeries, deseasonalized: &VolatilitySeries, normalized: &VolatilitySeries) -> Result<(), IoError> {
    let rows: Vec<Vec<Cell>> = raw
        .points()
        .iter()
        .zip(deseasonalized.points())
        .zip(normalized.points())
        .map(|((r, d), n)| vec![r.day.into(), r.slot.into(), r.value.into(), d.value.into(), n.value.into()])
        .collect();
    write_table(path, &VOLATILITY_HEADER, &rows)
}

/// Read one stage back from a volatility CSV.
pub fn read_volatility(path: &Path, stage: Stage, slots_per_day: u32) -> Result<VolatilitySeries, IoError> {
    let table = read_table(path)?;
    let column = match stage {
        Stage::Raw => "omega",
        Stage::Deseasonalized => "omega_deseasonalized",
        Stage::Normalized => "v",
    };
    let schema_err = |message: String| IoError::Schema { path: path.to_path_buf(), message };
    let (Some(day), Some(slot), Some(value)) = (table.column("day"), table.column("slot"), table.column(column)) else {
        return Err(schema_err(format!("expected columns day, slot and {column}")));
    };
    let points = day
        .iter()
        .zip(&slot)
        .zip(&value)
        .map(|((d, s), v)| match (d, s, v) {
            (Some(d), Some(s), Some(v)) => Ok(VolPoint { day: *d as u32, slot: *s as u32, value: *v }),
            _ => Err(schema_err("empty cell in volatility table".into())),
        })
        .collect::<Result<Vec<_>, _>>()?;
    VolatilitySeries::new(points, stage, slots_per_day).map_err(|e| schema_err(e.to_string()))
}

/// Write prices in the canonical `day,slot,price` layout.
pub fn write_prices(path: &Path, prices: &PriceSeries) -> Result<(), IoError> {
    let rows: Vec<Vec<Cell>> =
        prices.records().iter().map(|r| vec![r.day.into(), r.slot.into(), r.price.into()]).collect();
    write_table(path, &["day", "slot", "price"], &rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
        let p = dir.join(name);
        std::fs::write(&p, body).unwrap();
        p
    }

    #[test]
    fn loads_minimal_input() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(dir.path(), "a.csv", "0,0,100\n0,1,101");
        let s = load_price_csv(&p, &ColumnSchema::default(), 2).unwrap();
        assert_eq!(s.len(), 2);
        let p = write(dir.path(), "h.csv", "day,slot,price\n0,0,100\n0,1,101\n");
        assert_eq!(load_price_csv(&p, &ColumnSchema::default(), 2).unwrap().len(), 2);
        let named = ColumnSchema {
            day: ColumnRef::Name("d".into()),
            slot: ColumnRef::Name("s".into()),
            price: ColumnRef::Name("p".into()),
        };
        let p = write(dir.path(), "n.csv", "p,s,d\n100,0,0\n101,1,0\n");
        assert_eq!(load_price_csv(&p, &named, 2).unwrap().records()[1].price, 101.0);
    }

    #[test]
    fn rejects_bad_rows_with_line_numbers() {
        let dir = tempfile::tempdir().unwrap();
        let schema = ColumnSchema::default();
        let p = write(dir.path(), "z.csv", "0,0,100\n0,1,0\n");
        assert!(matches!(load_price_csv(&p, &schema, 2), Err(IoError::NonPositivePrice { line: 2, .. })));
        let p = write(dir.path(), "u.csv", "0,1,100\n0,0,101\n");
        assert!(matches!(load_price_csv(&p, &schema, 2), Err(IoError::UnsortedInput { line: 2, .. })));
        let p = write(dir.path(), "d.csv", "0,0,100\n0,0,101\n");
        assert!(matches!(load_price_csv(&p, &schema, 2), Err(IoError::DuplicateRecord { line: 2, .. })));
        let p = write(dir.path(), "x.csv", "0,0,100\n0,1,abc\n");
        assert!(matches!(load_price_csv(&p, &schema, 2), Err(IoError::Parse { line: 2, .. })));
        let p = write(dir.path(), "s.csv", "0,0,100\n0,5,101\n");
        assert!(matches!(load_price_csv(&p, &schema, 2), Err(IoError::SlotOutOfRange { line: 2, .. })));
        assert!(matches!(load_price_csv(&dir.path().join("nope.csv"), &schema, 2), Err(IoError::Missing { .. })));
    }

    #[test]
    fn table_layout() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("t.csv");
        write_table(&p, &["a", "b"], &[]).unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "a,b\n");
        write_table(&p, &["a", "b"], &[vec![Cell::Int(1), Cell::Real(0.5)]]).unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "a,b\n1,0.5\n");
        assert!(matches!(write_table(&p, &["a", "b"], &[vec![Cell::Int(1)]]), Err(IoError::Arity { .. })));
        write_table(&p, &["a", "b"], &[vec![Cell::Empty, Cell::Real(1.0 / 3.0)]]).unwrap();
        let t = read_table(&p).unwrap();
        assert_eq!(t.rows, vec![vec![None, Some(1.0 / 3.0)]]);
    }
}
