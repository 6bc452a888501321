//! Plain-text matrix files.
//!
//! Format: a header line `rows cols`, then `rows` lines of `cols` whitespace-
//! separated entries written as `re+imj` / `re-imj` (for example `1.5-0.25j`).
//! Numbers are printed with the shortest representation that parses back to
//! the identical bits, so a write/read cycle is lossless, including signed
//! zeros and subnormals.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write as IoWrite};
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numkernel::matrix::CMatrix;

fn format_f64(x: f64) -> String {
    // Debug formatting emits shortest round-trip digits; avoid the bare "1.0"
    // noise for integers is not worth losing exactness, so keep it as-is.
    format!("{:?}", x)
}

fn format_entry(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{}{}j", format_f64(z.re), sign, format_f64(z.im.abs()))
}

/// Splits `token` (with the trailing `j` already removed) at the sign that
/// separates the real and imaginary parts.  A sign character counts as a
/// separator only when it is not the leading character and does not follow
/// an exponent marker.
fn split_complex(token: &str) -> Option<(&str, char, &str)> {
    let bytes = token.as_bytes();
    let mut split = None;
    for i in 1..bytes.len() {
        let ch = bytes[i];
        if (ch == b'+' || ch == b'-') && !matches!(bytes[i - 1], b'e' | b'E') {
            if split.is_some() {
                return None; // more than one separator: malformed
            }
            split = Some(i);
        }
    }
    split.map(|i| (&token[..i], bytes[i] as char, &token[i + 1..]))
}

fn parse_entry(token: &str, line: usize) -> Result<Complex64> {
    let bad = |msg: String| Error::Parse { line, msg };
    if let Some(body) = token.strip_suffix(['j', 'J']) {
        let (re_str, sign, im_str) = split_complex(body)
            .ok_or_else(|| bad(format!("expected re+imj, got {token:?}")))?;
        let re: f64 = re_str
            .parse()
            .map_err(|_| bad(format!("bad real part in {token:?}")))?;
        let im_mag: f64 = im_str
            .parse()
            .map_err(|_| bad(format!("bad imaginary part in {token:?}")))?;
        let im = if sign == '-' { -im_mag } else { im_mag };
        Ok(Complex64::new(re, im))
    } else {
        // bare real entry
        let re: f64 = token
            .parse()
            .map_err(|_| bad(format!("bad entry {token:?}")))?;
        Ok(Complex64::new(re, 0.0))
    }
}

/// Writes `m` in the plain-text format described in the module docs.
pub fn write_cmx<W: IoWrite>(m: &CMatrix, out: &mut W) -> std::io::Result<()> {
    writeln!(out, "{} {}", m.rows(), m.cols())?;
    for i in 0..m.rows() {
        let mut line = String::new();
        for j in 0..m.cols() {
            if j > 0 {
                line.push(' ');
            }
            line.push_str(&format_entry(m[(i, j)]));
        }
        writeln!(out, "{line}")?;
    }
    Ok(())
}

/// Reads a matrix in the plain-text format described in the module docs.
pub fn read_cmx<R: BufRead>(input: &mut R) -> Result<CMatrix> {
    let mut lines = input.lines().enumerate();
    let (rows, cols) = loop {
        let (idx, line) = lines
            .next()
            .ok_or(Error::Parse { line: 1, msg: "empty input".into() })?;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut parts = trimmed.split_whitespace();
        let rows: usize = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse { line: idx + 1, msg: "bad row count".into() })?;
        let cols: usize = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse { line: idx + 1, msg: "bad column count".into() })?;
        if parts.next().is_some() {
            return Err(Error::Parse { line: idx + 1, msg: "header has trailing tokens".into() });
        }
        break (rows, cols);
    };
    let mut data = Vec::with_capacity(rows * cols);
    let mut filled = 0usize;
    while filled < rows {
        let (idx, line) = lines.next().ok_or(Error::Parse {
            line: 0,
            msg: format!("expected {rows} matrix rows, got {filled}"),
        })?;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        if tokens.len() != cols {
            return Err(Error::Parse {
                line: idx + 1,
                msg: format!("expected {cols} entries, got {}", tokens.len()),
            });
        }
        for t in tokens {
            data.push(parse_entry(t, idx + 1)?);
        }
        filled += 1;
    }
    CMatrix::new(rows, cols, data)
}

/// Writes `m` to `path`.
pub fn save_cmx<P: AsRef<Path>>(m: &CMatrix, path: P) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    write_cmx(m, &mut out)?;
    out.flush()?;
    Ok(())
}

/// Reads a matrix from `path`.
pub fn load_cmx<P: AsRef<Path>>(path: P) -> Result<CMatrix> {
    let mut input = BufReader::new(File::open(path)?);
    read_cmx(&mut input)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::rng;

    fn round_trip(m: &CMatrix) -> CMatrix {
        let mut buf = Vec::new();
        write_cmx(m, &mut buf).unwrap();
        read_cmx(&mut buf.as_slice()).unwrap()
    }

    fn bits_equal(a: &CMatrix, b: &CMatrix) -> bool {
        a.rows() == b.rows()
            && a.cols() == b.cols()
            && a.data().iter().zip(b.data()).all(|(x, y)| {
                x.re.to_bits() == y.re.to_bits() && x.im.to_bits() == y.im.to_bits()
            })
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let mut r = rng::stream("io-roundtrip", 0);
        let m = CMatrix::from_fn(5, 3, |_, _| rng::gaussian(&mut r).scale(1e3));
        assert!(bits_equal(&m, &round_trip(&m)));
    }

    #[test]
    fn round_trip_preserves_awkward_values() {
        let vals = [
            Complex64::new(0.0, -0.0),
            Complex64::new(-0.0, 0.0),
            Complex64::new(f64::MIN_POSITIVE, 5e-324),
            Complex64::new(1.0 + f64::EPSILON, -1e308),
            Complex64::new(0.1 + 0.2, -1.0 / 3.0),
        ];
        let m = CMatrix::new(1, vals.len(), vals.to_vec()).unwrap();
        assert!(bits_equal(&m, &round_trip(&m)));
    }

    #[test]
    fn parses_hand_written_variants() {
        let text = "# comment\n2 2\n1+2j -1.5-0.5j\n3 0+1e-3j\n";
        let m = read_cmx(&mut text.as_bytes()).unwrap();
        assert_eq!(m[(0, 0)], Complex64::new(1.0, 2.0));
        assert_eq!(m[(0, 1)], Complex64::new(-1.5, -0.5));
        assert_eq!(m[(1, 0)], Complex64::new(3.0, 0.0));
        assert_eq!(m[(1, 1)], Complex64::new(0.0, 1e-3));
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(read_cmx(&mut "2 2\n1+2j\n".as_bytes()).is_err()); // short row
        assert!(read_cmx(&mut "1 1\n1+2j+3j\n".as_bytes()).is_err()); // two signs
        assert!(read_cmx(&mut "1 1\nfoo\n".as_bytes()).is_err());
        assert!(read_cmx(&mut "".as_bytes()).is_err());
    }
}
