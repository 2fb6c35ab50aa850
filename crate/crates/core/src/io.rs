//! Export and import of bases and cross-Gramians.
//!
//! Two encodings are supported. The CSV form starts with a `#` line of
//! `key=value` fields, then a header row, then one row per matrix row. The
//! binary form is a magic tag, a little-endian `u64` header and the matrix in
//! column-major `f64` order. A basis is stored as its 1-d factor matrix
//! (`2^q` grid rows, one column per factor function).

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::gramian::{Gramian, Method};
use crate::walsh::{WalshOrdering, WalshSpec};
use crate::wavelet::{ScalingBasis, SparseColumn, WaveletSpec};

const BASIS_MAGIC: &[u8; 8] = b"BSMPBAS1";
const GRAMIAN_MAGIC: &[u8; 8] = b"BSMPGRM1";

/// On-disk encoding.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Binary,
}

impl Format {
    /// `.csv` selects CSV, anything else binary.
    pub fn from_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("csv") => Format::Csv,
            _ => Format::Binary,
        }
    }
}

fn spec_fields(spec: &WaveletSpec) -> String {
    format!(
        "p={} J0={} R={} d={} q={}",
        spec.order, spec.coarse_level, spec.level, spec.dim, spec.depth
    )
}

fn parse_header(line: &str, kind: &str) -> Result<HashMap<String, String>> {
    let rest = line
        .strip_prefix('#')
        .map(str::trim)
        .and_then(|r| r.strip_prefix(kind))
        .ok_or_else(|| Error::Parse(format!("missing '# {kind}' header line")))?;
    rest.split_whitespace()
        .map(|tok| {
            tok.split_once('=')
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .ok_or_else(|| Error::Parse(format!("malformed header field '{tok}'")))
        })
        .collect()
}

fn field<T: std::str::FromStr>(fields: &HashMap<String, String>, key: &str) -> Result<T> {
    let raw = fields
        .get(key)
        .ok_or_else(|| Error::Parse(format!("header is missing '{key}'")))?;
    raw.parse()
        .map_err(|_| Error::Parse(format!("bad value '{raw}' for '{key}'")))
}

fn spec_from_fields(fields: &HashMap<String, String>) -> Result<WaveletSpec> {
    WaveletSpec::new(
        field(fields, "p")?,
        field(fields, "J0")?,
        field(fields, "R")?,
        field(fields, "d")?,
        field(fields, "q")?,
    )
}

fn parse_freqs(raw: &str) -> Result<Vec<usize>> {
    raw.split('x')
        .map(|t| {
            t.parse()
                .map_err(|_| Error::Parse(format!("bad sample count '{raw}'")))
        })
        .collect()
}

fn write_csv_body<W: Write>(w: &mut W, prefix: char, m: &DMatrix<f64>) -> Result<()> {
    let header: Vec<String> = (0..m.ncols()).map(|j| format!("{prefix}{j}")).collect();
    writeln!(w, "{}", header.join(","))?;
    let mut line = String::new();
    for i in 0..m.nrows() {
        line.clear();
        for j in 0..m.ncols() {
            if j > 0 {
                line.push(',');
            }
            line.push_str(&m[(i, j)].to_string());
        }
        writeln!(w, "{line}")?;
    }
    Ok(())
}

fn read_csv_body(lines: &mut impl Iterator<Item = std::io::Result<String>>, rows: usize, cols: usize) -> Result<DMatrix<f64>> {
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("missing column header row".into()))??;
    if header.split(',').count() != cols {
        return Err(Error::Parse(format!("expected {cols} columns in header")));
    }
    let mut m = DMatrix::zeros(rows, cols);
    for i in 0..rows {
        let line = lines
            .next()
            .ok_or_else(|| Error::Parse(format!("expected {rows} data rows, got {i}")))??;
        let mut count = 0;
        for (j, tok) in line.split(',').enumerate() {
            if j >= cols {
                return Err(Error::Parse(format!("row {i} has too many fields")));
            }
            m[(i, j)] = tok
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad number '{tok}' in row {i}")))?;
            count += 1;
        }
        if count != cols {
            return Err(Error::Parse(format!("row {i} has {count} fields, expected {cols}")));
        }
    }
    Ok(m)
}

fn write_u64s<W: Write>(w: &mut W, vals: &[u64]) -> Result<()> {
    for v in vals {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

fn read_u64<R: Read>(r: &mut R) -> Result<u64> {
    let mut buf = [0u8; 8];
    r.read_exact(&mut buf)?;
    Ok(u64::from_le_bytes(buf))
}

fn read_usize<R: Read>(r: &mut R) -> Result<usize> {
    usize::try_from(read_u64(r)?).map_err(|_| Error::Parse("header value overflows usize".into()))
}

fn read_u32<R: Read>(r: &mut R) -> Result<u32> {
    u32::try_from(read_u64(r)?).map_err(|_| Error::Parse("header value overflows u32".into()))
}

fn write_matrix_bin<W: Write>(w: &mut W, m: &DMatrix<f64>) -> Result<()> {
    for v in m.iter() {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

fn read_matrix_bin<R: Read>(r: &mut R, rows: usize, cols: usize) -> Result<DMatrix<f64>> {
    let mut data = vec![0.0; rows * cols];
    let mut buf = [0u8; 8];
    for v in data.iter_mut() {
        r.read_exact(&mut buf)?;
        *v = f64::from_le_bytes(buf);
    }
    Ok(DMatrix::from_vec(rows, cols, data))
}

fn check_magic<R: Read>(r: &mut R, magic: &[u8; 8]) -> Result<()> {
    let mut tag = [0u8; 8];
    r.read_exact(&mut tag)?;
    if &tag != magic {
        return Err(Error::Parse("unrecognized binary header".into()));
    }
    Ok(())
}

fn ordering_code(o: WalshOrdering) -> u64 {
    match o {
        WalshOrdering::Kaczmarz => 0,
        WalshOrdering::Paley => 1,
        WalshOrdering::Natural => 2,
    }
}

fn ordering_from_code(c: u64) -> Result<WalshOrdering> {
    WalshOrdering::ALL
        .get(c as usize)
        .copied()
        .ok_or_else(|| Error::Parse(format!("unknown ordering code {c}")))
}

fn method_code(m: Method) -> u64 {
    match m {
        Method::QuadratureWht => 0,
        Method::Direct => 1,
    }
}

fn method_from_code(c: u64) -> Result<Method> {
    match c {
        0 => Ok(Method::QuadratureWht),
        1 => Ok(Method::Direct),
        _ => Err(Error::Parse(format!("unknown method code {c}"))),
    }
}

fn factor_matrix(basis: &ScalingBasis) -> DMatrix<f64> {
    let side = basis.spec().side();
    let cols = basis.columns_1d();
    DMatrix::from_fn(side, cols.len(), |i, j| cols[j].get(i))
}

fn basis_from_matrix(spec: WaveletSpec, m: &DMatrix<f64>) -> Result<ScalingBasis> {
    if m.nrows() != spec.side() || m.ncols() != spec.per_axis() {
        return Err(Error::DimensionMismatch {
            expected: spec.side() * spec.per_axis(),
            got: m.nrows() * m.ncols(),
        });
    }
    let columns = m
        .column_iter()
        .map(|c| SparseColumn::from_dense(c.as_slice()))
        .collect();
    let kinds = ScalingBasis::default_kinds(&spec);
    ScalingBasis::from_columns(spec, columns, kinds)
}

pub fn write_basis_csv<W: Write>(basis: &ScalingBasis, mut w: W) -> Result<()> {
    writeln!(w, "# basis {}", spec_fields(basis.spec()))?;
    write_csv_body(&mut w, 'f', &factor_matrix(basis))
}

pub fn read_basis_csv<R: BufRead>(r: R) -> Result<ScalingBasis> {
    let mut lines = r.lines();
    let first = lines
        .next()
        .ok_or_else(|| Error::Parse("empty basis file".into()))??;
    let spec = spec_from_fields(&parse_header(&first, "basis")?)?;
    let m = read_csv_body(&mut lines, spec.side(), spec.per_axis())?;
    basis_from_matrix(spec, &m)
}

pub fn write_basis_binary<W: Write>(basis: &ScalingBasis, mut w: W) -> Result<()> {
    let s = basis.spec();
    w.write_all(BASIS_MAGIC)?;
    write_u64s(
        &mut w,
        &[
            s.order as u64,
            s.coarse_level as u64,
            s.level as u64,
            s.dim as u64,
            s.depth as u64,
        ],
    )?;
    write_matrix_bin(&mut w, &factor_matrix(basis))
}

pub fn read_basis_binary<R: Read>(mut r: R) -> Result<ScalingBasis> {
    check_magic(&mut r, BASIS_MAGIC)?;
    let spec = WaveletSpec::new(
        read_usize(&mut r)?,
        read_u32(&mut r)?,
        read_u32(&mut r)?,
        read_usize(&mut r)?,
        read_u32(&mut r)?,
    )?;
    let m = read_matrix_bin(&mut r, spec.side(), spec.per_axis())?;
    basis_from_matrix(spec, &m)
}

pub fn write_gramian_csv<W: Write>(g: &Gramian, mut w: W) -> Result<()> {
    writeln!(
        w,
        "# gramian M={} N={} {} ordering={} method={}",
        join_freqs(&g.sampling().max_freq),
        g.cols(),
        spec_fields(g.recon()),
        g.sampling().ordering,
        g.method()
    )?;
    write_csv_body(&mut w, 'n', g.matrix())
}

pub fn read_gramian_csv<R: BufRead>(r: R) -> Result<Gramian> {
    let mut lines = r.lines();
    let first = lines
        .next()
        .ok_or_else(|| Error::Parse("empty Gramian file".into()))??;
    let fields = parse_header(&first, "gramian")?;
    let recon = spec_from_fields(&fields)?;
    let freqs = parse_freqs(fields.get("M").map(String::as_str).unwrap_or(""))?;
    let sampling = WalshSpec::new(field(&fields, "ordering")?, freqs)?;
    let n: usize = field(&fields, "N")?;
    if n != recon.len() {
        return Err(Error::DimensionMismatch {
            expected: recon.len(),
            got: n,
        });
    }
    let method: Method = field(&fields, "method")?;
    let m = read_csv_body(&mut lines, sampling.len(), n)?;
    Gramian::from_parts(m, sampling, recon, method)
}

pub fn write_gramian_binary<W: Write>(g: &Gramian, mut w: W) -> Result<()> {
    let s = g.recon();
    w.write_all(GRAMIAN_MAGIC)?;
    write_u64s(
        &mut w,
        &[
            s.order as u64,
            s.coarse_level as u64,
            s.level as u64,
            s.dim as u64,
            s.depth as u64,
            ordering_code(g.sampling().ordering),
            method_code(g.method()),
        ],
    )?;
    let freqs: Vec<u64> = g.sampling().max_freq.iter().map(|&m| m as u64).collect();
    write_u64s(&mut w, &freqs)?;
    write_matrix_bin(&mut w, g.matrix())
}

pub fn read_gramian_binary<R: Read>(mut r: R) -> Result<Gramian> {
    check_magic(&mut r, GRAMIAN_MAGIC)?;
    let recon = WaveletSpec::new(
        read_usize(&mut r)?,
        read_u32(&mut r)?,
        read_u32(&mut r)?,
        read_usize(&mut r)?,
        read_u32(&mut r)?,
    )?;
    let ordering = ordering_from_code(read_u64(&mut r)?)?;
    let method = method_from_code(read_u64(&mut r)?)?;
    let freqs = (0..recon.dim)
        .map(|_| read_usize(&mut r))
        .collect::<Result<Vec<_>>>()?;
    let sampling = WalshSpec::new(ordering, freqs)?;
    let m = read_matrix_bin(&mut r, sampling.len(), recon.len())?;
    Gramian::from_parts(m, sampling, recon, method)
}

fn join_freqs(m: &[usize]) -> String {
    m.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("x")
}

pub fn save_basis(basis: &ScalingBasis, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    match Format::from_path(path) {
        Format::Csv => write_basis_csv(basis, &mut w)?,
        Format::Binary => write_basis_binary(basis, &mut w)?,
    }
    w.flush()?;
    Ok(())
}

pub fn load_basis(path: &Path) -> Result<ScalingBasis> {
    let r = BufReader::new(File::open(path)?);
    match Format::from_path(path) {
        Format::Csv => read_basis_csv(r),
        Format::Binary => read_basis_binary(r),
    }
}

pub fn save_gramian(g: &Gramian, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    match Format::from_path(path) {
        Format::Csv => write_gramian_csv(g, &mut w)?,
        Format::Binary => write_gramian_binary(g, &mut w)?,
    }
    w.flush()?;
    Ok(())
}

pub fn load_gramian(path: &Path) -> Result<Gramian> {
    let r = BufReader::new(File::open(path)?);
    match Format::from_path(path) {
        Format::Csv => read_gramian_csv(r),
        Format::Binary => read_gramian_binary(r),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gramian::assemble;

    fn sample_basis() -> ScalingBasis {
        ScalingBasis::new(WaveletSpec::new(2, 2, 4, 1, 9).unwrap()).unwrap()
    }

    #[test]
    fn basis_csv_round_trip() {
        let b = sample_basis();
        let mut buf = Vec::new();
        write_basis_csv(&b, &mut buf).unwrap();
        let back = read_basis_csv(buf.as_slice()).unwrap();
        assert_eq!(back.spec(), b.spec());
        assert_eq!(back.columns_1d(), b.columns_1d());
    }

    #[test]
    fn basis_binary_round_trip() {
        let b = ScalingBasis::new(WaveletSpec::new(4, 3, 4, 2, 9).unwrap()).unwrap();
        let mut buf = Vec::new();
        write_basis_binary(&b, &mut buf).unwrap();
        let back = read_basis_binary(buf.as_slice()).unwrap();
        assert_eq!(back.spec(), b.spec());
        assert_eq!(back.columns_1d(), b.columns_1d());
    }

    #[test]
    fn gramian_round_trips() {
        let spec = WaveletSpec::new(2, 2, 3, 2, 8).unwrap();
        let sampling = WalshSpec::new(WalshOrdering::Paley, vec![10, 10]).unwrap();
        let g = assemble(&sampling, &spec, Method::Direct).unwrap();

        let mut csv = Vec::new();
        write_gramian_csv(&g, &mut csv).unwrap();
        let head = String::from_utf8(csv.clone()).unwrap();
        assert!(head.starts_with("# gramian M=10x10 N=64 p=2 J0=2 R=3 d=2 q=8 ordering=paley method=direct\n"));
        let a = read_gramian_csv(csv.as_slice()).unwrap();

        let mut bin = Vec::new();
        write_gramian_binary(&g, &mut bin).unwrap();
        let b = read_gramian_binary(bin.as_slice()).unwrap();

        for back in [a, b] {
            assert_eq!(back.matrix(), g.matrix());
            assert_eq!(back.sampling(), g.sampling());
            assert_eq!(back.recon(), g.recon());
            assert_eq!(back.method(), g.method());
        }
    }

    #[test]
    fn rejects_corrupt_input() {
        assert!(read_basis_csv("# gramian p=2".as_bytes()).is_err());
        assert!(read_basis_binary(&b"BSMPGRM1"[..]).is_err());
        let mut buf = Vec::new();
        write_basis_csv(&sample_basis(), &mut buf).unwrap();
        buf.truncate(buf.len() / 2);
        assert!(read_basis_csv(buf.as_slice()).is_err());
    }
}
