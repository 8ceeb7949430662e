//! Grid scans over `(d, n)` with per-field caching, ordered output and
//! per-field checkpoints.
//!
//! Work is split by `d`: each worker computes the fundamental unit and class
//! number of one field once, then every index `n` in the range. Results are
//! written by a single writer in ascending `d`, so the output does not depend
//! on the worker count. After each field the checkpoint file `<out>.ckpt` is
//! replaced atomically; `--resume` truncates the output back to the rows the
//! checkpoint accounts for and continues with the next field.

use std::collections::{BTreeMap, HashMap};
use std::fs::{self, File, OpenOptions};
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::arith::{self, SpfSieve};
use crate::classify::{ClassificationRecord, FieldData};
use crate::error::{Error, Result};
use crate::lfun;
use crate::oracle;
use crate::quadfield::SplitKind;
use crate::unitindex;

pub const CSV_HEADER: &str =
    "d,n,D,m,L,ideal_preserving,locally_associated,associated,h_maximal,h_order,hfd";

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub enum OutputFormat {
    #[default]
    Csv,
    Jsonl,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "jsonl" => Ok(OutputFormat::Jsonl),
            other => Err(Error::InvalidArgument(format!("unknown format {other:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ScanConfig {
    pub d_min: i64,
    pub d_max: i64,
    pub n_min: u64,
    pub n_max: u64,
    pub out: PathBuf,
    pub format: OutputFormat,
    pub resume: bool,
    pub jobs: usize,
    /// Cross-check every cell with `n` within the oracle bound.
    pub verify: bool,
}

impl ScanConfig {
    pub fn new(d_min: i64, d_max: i64, n_min: u64, n_max: u64, out: impl Into<PathBuf>) -> Self {
        ScanConfig {
            d_min,
            d_max,
            n_min,
            n_max,
            out: out.into(),
            format: OutputFormat::Csv,
            resume: false,
            jobs: 1,
            verify: false,
        }
    }

    pub fn checkpoint_path(&self) -> PathBuf {
        let mut name = self.out.as_os_str().to_owned();
        name.push(".ckpt");
        PathBuf::from(name)
    }

    /// Squarefree `d` in range, excluding 0 and 1, ascending.
    pub fn fields(&self) -> Vec<i64> {
        (self.d_min..=self.d_max)
            .filter(|&d| d != 0 && d != 1 && arith::is_squarefree(d).unwrap_or(false))
            .collect()
    }

    fn validate(&self) -> Result<()> {
        if self.n_min == 0 {
            return Err(Error::InvalidArgument("n_min must be at least 1".into()));
        }
        if self.jobs == 0 {
            return Err(Error::InvalidArgument(
                "worker count must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct ScanSummary {
    pub records: u64,
    /// Half-factorial orders with `n > 1`.
    pub hfd: u64,
    pub elapsed: Duration,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Checkpoint {
    pub last_d: i64,
    pub rows: u64,
    pub hfd: u64,
}

impl Checkpoint {
    pub fn render(&self) -> String {
        format!("d={}\nrows={}\nhfd={}\n", self.last_d, self.rows, self.hfd)
    }

    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let mut fields: HashMap<&str, &str> = HashMap::new();
        for (i, line) in text.lines().enumerate() {
            let (k, v) = line.split_once('=').ok_or_else(|| Error::Malformed {
                path: path.to_owned(),
                line: i + 1,
                message: format!("expected key=value, got {line:?}"),
            })?;
            fields.insert(k.trim(), v.trim());
        }
        let get = |key: &str| -> Result<&str> {
            fields.get(key).copied().ok_or_else(|| Error::Malformed {
                path: path.to_owned(),
                line: 0,
                message: format!("missing {key}"),
            })
        };
        let bad = |key: &str| Error::Malformed {
            path: path.to_owned(),
            line: 0,
            message: format!("bad value for {key}"),
        };
        Ok(Checkpoint {
            last_d: get("d")?.parse().map_err(|_| bad("d"))?,
            rows: get("rows")?.parse().map_err(|_| bad("rows"))?,
            hfd: get("hfd")?.parse().map_err(|_| bad("hfd"))?,
        })
    }

    pub fn load(path: &Path) -> Result<Option<Self>> {
        match fs::read_to_string(path) {
            Ok(text) => Checkpoint::parse(&text, path).map(Some),
            Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(e.into()),
        }
    }

    /// Write to a sibling temp file and rename over the target.
    pub fn store(&self, path: &Path) -> Result<()> {
        let mut tmp = path.as_os_str().to_owned();
        tmp.push(".tmp");
        let tmp = PathBuf::from(tmp);
        {
            let mut f = File::create(&tmp)?;
            f.write_all(self.render().as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, path)?;
        Ok(())
    }
}

pub fn csv_row(r: &ClassificationRecord) -> String {
    let b = |x: bool| u8::from(x);
    format!(
        "{},{},{},{},{},{},{},{},{},{},{}",
        r.d,
        r.n,
        r.disc,
        r.m,
        r.l,
        b(r.ideal_preserving),
        b(r.locally_associated),
        b(r.associated),
        r.h_maximal,
        r.h_order,
        b(r.hfd)
    )
}

pub fn parse_csv_row(line: &str) -> std::result::Result<ClassificationRecord, String> {
    let cols: Vec<&str> = line.split(',').map(str::trim).collect();
    if cols.len() != 11 {
        return Err(format!("expected 11 columns, found {}", cols.len()));
    }
    fn int<T: FromStr>(s: &str, name: &str) -> std::result::Result<T, String> {
        s.parse()
            .map_err(|_| format!("column {name}: {s:?} is not an integer"))
    }
    fn flag(s: &str, name: &str) -> std::result::Result<bool, String> {
        match s {
            "0" => Ok(false),
            "1" => Ok(true),
            _ => Err(format!("column {name}: {s:?} is not 0 or 1")),
        }
    }
    Ok(ClassificationRecord {
        d: int(cols[0], "d")?,
        n: int(cols[1], "n")?,
        disc: int(cols[2], "D")?,
        m: int(cols[3], "m")?,
        l: int(cols[4], "L")?,
        ideal_preserving: flag(cols[5], "ideal_preserving")?,
        locally_associated: flag(cols[6], "locally_associated")?,
        associated: flag(cols[7], "associated")?,
        h_maximal: int(cols[8], "h_maximal")?,
        h_order: int(cols[9], "h_order")?,
        hfd: flag(cols[10], "hfd")?,
    })
}

fn render_row(r: &ClassificationRecord, format: OutputFormat) -> Result<String> {
    Ok(match format {
        OutputFormat::Csv => csv_row(r),
        OutputFormat::Jsonl => serde_json::to_string(r)?,
    })
}

/// Per-field state for a scan: prime-power unit indices, `L` values and
/// inertness are computed once and reused for every `n`.
struct FieldScan<'a> {
    data: FieldData,
    sieve: &'a SpfSieve,
    /// `q = p^a ↦ (m(q), L(q))`
    prime_powers: HashMap<u64, (u64, u64)>,
    inert: HashMap<u64, bool>,
}

impl<'a> FieldScan<'a> {
    fn new(d: i64, sieve: &'a SpfSieve) -> Result<Self> {
        Ok(FieldScan {
            data: FieldData::new(d)?,
            sieve,
            prime_powers: HashMap::new(),
            inert: HashMap::new(),
        })
    }

    fn record(&mut self, n: u64) -> Result<ClassificationRecord> {
        let fact = self.sieve.factorize(n)?;
        let d = self.data.d();
        let (mut m, mut l, mut ip) = (1u64, 1u64, true);
        for (p, a) in fact.iter() {
            let q = p.pow(a);
            let (mq, lq) = match self.prime_powers.get(&q) {
                Some(&v) => v,
                None => {
                    let v = (
                        unitindex::min_power_prime_power(&self.data.field, &self.data.unit, p, a)?,
                        lfun::l_prime_power_unchecked(p, a, d),
                    );
                    self.prime_powers.insert(q, v);
                    v
                }
            };
            m = arith::lcm(m, mq);
            l *= lq;
            let inert = match self.inert.get(&p) {
                Some(&v) => v,
                None => {
                    let v = self.data.field.split_kind(p)? == SplitKind::Inert;
                    self.inert.insert(p, v);
                    v
                }
            };
            ip &= inert;
        }
        self.data.assemble(n, &fact, m, l, ip)
    }

    fn verify(&self, rec: &ClassificationRecord) -> Result<()> {
        if rec.n < 2 || rec.n > oracle::MAX_MODULUS {
            return Ok(());
        }
        let f = &self.data.field;
        let u = &self.data.unit;
        let checks = [
            (
                "locally associated",
                rec.locally_associated,
                oracle::brute_locally_associated(f, u, rec.n)?,
            ),
            (
                "ideal-preserving",
                rec.ideal_preserving,
                oracle::brute_ideal_preserving(f, rec.n)?,
            ),
            (
                "associated",
                rec.associated,
                oracle::brute_associated(f, u, rec.n)?,
            ),
        ];
        for (name, closed, brute) in checks {
            if closed != brute {
                return Err(Error::OracleMismatch {
                    d: rec.d,
                    n: rec.n,
                    detail: format!("{name}: closed form {closed}, oracle {brute}"),
                });
            }
        }
        Ok(())
    }
}

/// Classify every `n` in `n_min..=n_max` for one field.
pub fn scan_field(
    d: i64,
    n_min: u64,
    n_max: u64,
    sieve: &SpfSieve,
    verify: bool,
) -> Result<Vec<ClassificationRecord>> {
    let mut state = FieldScan::new(d, sieve)?;
    let mut out = Vec::with_capacity(n_max.saturating_sub(n_min) as usize + 1);
    for n in n_min..=n_max {
        let rec = state.record(n)?;
        if verify {
            state.verify(&rec)?;
        }
        out.push(rec);
    }
    Ok(out)
}

/// Cut `path` down to its first `lines` lines.
fn truncate_to_lines(path: &Path, lines: u64) -> Result<()> {
    let mut reader = BufReader::new(File::open(path)?);
    let mut offset = 0u64;
    let mut seen = 0u64;
    let mut buf = Vec::new();
    while seen < lines {
        buf.clear();
        let read = reader.read_until(b'\n', &mut buf)?;
        if read == 0 || buf.last() != Some(&b'\n') {
            return Err(Error::Malformed {
                path: path.to_owned(),
                line: seen as usize + 1,
                message: format!("output is shorter than the {lines} lines its checkpoint records"),
            });
        }
        offset += read as u64;
        seen += 1;
    }
    OpenOptions::new().write(true).open(path)?.set_len(offset)?;
    Ok(())
}

pub fn scan(cfg: &ScanConfig) -> Result<ScanSummary> {
    let start = Instant::now();
    cfg.validate()?;
    let fields = cfg.fields();
    if cfg.n_min > cfg.n_max || fields.is_empty() {
        return Ok(ScanSummary {
            records: 0,
            hfd: 0,
            elapsed: start.elapsed(),
        });
    }
    let ckpt_path = cfg.checkpoint_path();
    let header_lines = u64::from(cfg.format == OutputFormat::Csv);

    let resumed = if cfg.resume {
        Checkpoint::load(&ckpt_path)?
    } else {
        None
    };
    let (mut writer, mut progress) = match resumed {
        Some(ck) if cfg.out.exists() => {
            truncate_to_lines(&cfg.out, header_lines + ck.rows)?;
            let f = OpenOptions::new().append(true).open(&cfg.out)?;
            (BufWriter::new(f), ck)
        }
        _ => {
            let mut w = BufWriter::new(File::create(&cfg.out)?);
            if cfg.format == OutputFormat::Csv {
                writeln!(w, "{CSV_HEADER}")?;
            }
            w.flush()?;
            let fresh = Checkpoint {
                last_d: i64::MIN,
                rows: 0,
                hfd: 0,
            };
            (w, fresh)
        }
    };
    let pending: Vec<i64> = fields
        .into_iter()
        .filter(|&d| d > progress.last_d)
        .collect();

    let sieve = SpfSieve::new(cfg.n_max.min(1 << 24));
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    let batch = (cfg.jobs * 4).max(1);
    for chunk in pending.chunks(batch) {
        let results: Vec<Result<Vec<ClassificationRecord>>> = pool.install(|| {
            chunk
                .par_iter()
                .map(|&d| scan_field(d, cfg.n_min, cfg.n_max, &sieve, cfg.verify))
                .collect()
        });
        for (&d, rows) in chunk.iter().zip(results) {
            let rows = rows?;
            for r in &rows {
                writeln!(writer, "{}", render_row(r, cfg.format)?)?;
            }
            writer.flush()?;
            writer.get_ref().sync_data()?;
            progress = Checkpoint {
                last_d: d,
                rows: progress.rows + rows.len() as u64,
                hfd: progress.hfd + rows.iter().filter(|r| r.hfd && r.n > 1).count() as u64,
            };
            progress.store(&ckpt_path)?;
        }
    }
    Ok(ScanSummary {
        records: progress.rows,
        hfd: progress.hfd,
        elapsed: start.elapsed(),
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HfdReport {
    pub rows: u64,
    /// Half-factorial rows with `n > 1`.
    pub total: u64,
    pub per_d: BTreeMap<i64, u64>,
}

impl HfdReport {
    fn add(&mut self, r: &ClassificationRecord) {
        self.rows += 1;
        if r.hfd && r.n > 1 {
            self.total += 1;
            *self.per_d.entry(r.d).or_insert(0) += 1;
        }
    }
}

/// Stream every record of a scan output (CSV or JSONL, detected from the
/// first line).
pub fn for_each_record(path: &Path, mut visit: impl FnMut(ClassificationRecord)) -> Result<()> {
    let mut text = String::new();
    File::open(path)?.read_to_string(&mut text)?;
    let malformed = |line: usize, message: String| Error::Malformed {
        path: path.to_owned(),
        line,
        message,
    };
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .peekable();
    let jsonl = match lines.peek() {
        None => return Ok(()),
        Some((_, first)) => first.trim_start().starts_with('{'),
    };
    if !jsonl {
        let (i, header) = lines.next().expect("peeked");
        if header.trim() != CSV_HEADER {
            return Err(malformed(i + 1, format!("expected header {CSV_HEADER:?}")));
        }
    }
    for (i, line) in lines {
        let rec = if jsonl {
            serde_json::from_str(line).map_err(|e| malformed(i + 1, e.to_string()))?
        } else {
            parse_csv_row(line).map_err(|e| malformed(i + 1, e))?
        };
        visit(rec);
    }
    Ok(())
}

pub fn report_hfd(path: &Path) -> Result<HfdReport> {
    let mut report = HfdReport::default();
    for_each_record(path, |r| report.add(&r))?;
    Ok(report)
}
