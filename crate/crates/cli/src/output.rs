//! Output files: CSV tables, plot data and the run manifest.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use binsamp::{Error, GridSignal, Result};

/// Shortest round-trip decimal form; `nan` and `inf` spelled out.
pub fn num(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        v.to_string()
    }
}

pub struct OutDir {
    root: PathBuf,
    written: Vec<String>,
}

impl OutDir {
    pub fn create(root: &Path) -> Result<Self> {
        fs::create_dir_all(root)?;
        Ok(OutDir {
            root: root.to_path_buf(),
            written: Vec::new(),
        })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    /// Record a file written by someone else.
    pub fn note(&mut self, name: &str) {
        self.written.push(name.to_string());
    }

    pub fn write(&mut self, name: &str, content: &str) -> Result<()> {
        fs::write(self.path(name), content)?;
        self.note(name);
        Ok(())
    }

    pub fn files(&self) -> &[String] {
        &self.written
    }
}

/// Build a CSV document from a header and rows of preformatted fields.
pub fn csv(header: &str, rows: impl IntoIterator<Item = String>) -> String {
    let mut s = String::with_capacity(64);
    s.push_str(header);
    s.push('\n');
    for r in rows {
        s.push_str(&r);
        s.push('\n');
    }
    s
}

/// One row per grid point: coordinates then value.
pub fn grid_csv(g: &GridSignal) -> String {
    let d = g.dim();
    let side = g.side();
    let h = 1.0 / side as f64;
    let header = match d {
        1 => "x,value".to_string(),
        2 => "x,y,value".to_string(),
        _ => {
            let mut cols: Vec<String> = (0..d).map(|k| format!("x{k}")).collect();
            cols.push("value".into());
            cols.join(",")
        }
    };
    let mut s = String::with_capacity(g.len() * 24);
    s.push_str(&header);
    s.push('\n');
    let mut idx = vec![0usize; d];
    for (flat, v) in g.data().iter().enumerate() {
        let mut rem = flat;
        for k in (0..d).rev() {
            idx[k] = rem % side;
            rem /= side;
        }
        for &i in &idx {
            let _ = write!(s, "{},", num(i as f64 * h));
        }
        s.push_str(&num(*v));
        s.push('\n');
    }
    s
}

/// Read numbers from a text file.
///
/// Blank lines and `#` comments are skipped. If the first remaining line is
/// not numeric it is a header, and each later row contributes its `value`
/// column (or its last column). Otherwise every comma or whitespace
/// separated field is a value.
pub fn read_values(path: &Path) -> Result<Vec<f64>> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    parse_values(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn fields(line: &str) -> impl Iterator<Item = &str> {
    line.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
}

pub fn parse_values(text: &str) -> Result<Vec<f64>> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .peekable();
    let parse = |lineno: usize, t: &str| {
        t.parse::<f64>()
            .map_err(|_| Error::Parse(format!("line {lineno}: '{t}' is not a number")))
    };
    let column = match lines.peek() {
        Some(&(_, first)) if fields(first).any(|t| t.parse::<f64>().is_err()) => {
            let names: Vec<&str> = fields(first).collect();
            let col = names
                .iter()
                .position(|n| n.eq_ignore_ascii_case("value"))
                .unwrap_or(names.len() - 1);
            lines.next();
            Some((col, names.len()))
        }
        _ => None,
    };
    let mut out = Vec::new();
    for (lineno, line) in lines {
        match column {
            Some((col, width)) => {
                let f: Vec<&str> = fields(line).collect();
                if f.len() != width {
                    return Err(Error::Parse(format!(
                        "line {lineno}: expected {width} fields, got {}",
                        f.len()
                    )));
                }
                out.push(parse(lineno, f[col])?);
            }
            None => {
                for t in fields(line) {
                    out.push(parse(lineno, t)?);
                }
            }
        }
    }
    if out.is_empty() {
        return Err(Error::Parse("no values found".into()));
    }
    Ok(out)
}

/// `key = value` record of one run.
pub struct Manifest {
    pub command: String,
    pub config: String,
    pub results: Vec<(String, String)>,
}

impl Manifest {
    pub fn render(&self, elapsed_seconds: f64, passed: Option<bool>, files: &[String]) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "[run]");
        let _ = writeln!(s, "command = {}", self.command);
        let _ = writeln!(s, "version = {}", binsamp_version());
        let _ = writeln!(s, "elapsed_seconds = {elapsed_seconds:.3}");
        match passed {
            Some(p) => {
                let _ = writeln!(s, "passed = {p}");
            }
            None => {
                let _ = writeln!(s, "passed = error");
            }
        }
        let _ = writeln!(s, "files = {}", files.join(" "));
        s.push_str(&self.config);
        let _ = writeln!(s, "[result]");
        for (k, v) in &self.results {
            let _ = writeln!(s, "{k} = {v}");
        }
        s
    }
}

fn binsamp_version() -> &'static str {
    env!("CARGO_PKG_VERSION")
}
