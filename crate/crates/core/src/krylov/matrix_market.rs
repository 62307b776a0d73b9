//! Matrix Market coordinate files (`matrix coordinate real symmetric`).

use std::io::{BufRead, Write};

use crate::numerics::{PrecisionContext, Real};

use super::{KrylovError, SparseSymmetric};

fn err(line: usize, message: impl Into<String>) -> KrylovError {
    KrylovError::MatrixMarket {
        line,
        message: message.into(),
    }
}

/// Reads a symmetric real coordinate matrix, values parsed at `ctx`.
///
/// Any other header (general, pattern, complex, array) is rejected.
pub fn read_matrix_market<R: BufRead>(
    input: R,
    ctx: &PrecisionContext,
) -> Result<SparseSymmetric, KrylovError> {
    let mut lines = input.lines().enumerate().map(|(i, l)| (i + 1, l));

    let (_, header) = lines.next().ok_or_else(|| err(1, "empty file"))?;
    let header = header?;
    let tokens: Vec<String> = header
        .split_whitespace()
        .map(|s| s.to_ascii_lowercase())
        .collect();
    if tokens.first().map(String::as_str) != Some("%%matrixmarket") {
        return Err(err(1, "header must start with %%MatrixMarket"));
    }
    let expected = ["matrix", "coordinate", "real", "symmetric"];
    for (pos, want) in expected.iter().enumerate() {
        match tokens.get(pos + 1) {
            Some(t) if t == want => {}
            Some(t) => {
                return Err(err(
                    1,
                    format!("unsupported header field {t:?}; need `matrix coordinate real symmetric`"),
                ))
            }
            None => return Err(err(1, format!("header is missing {want:?}"))),
        }
    }

    let mut size: Option<(usize, usize)> = None;
    let mut triplets = Vec::new();
    for (ln, line) in lines {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('%') {
            continue;
        }
        let fields: Vec<&str> = t.split_whitespace().collect();
        match size {
            None => {
                if fields.len() != 3 {
                    return Err(err(ln, "size line must be `rows cols nnz`"));
                }
                let parse = |s: &str| s.parse::<usize>().map_err(|_| err(ln, format!("bad integer {s:?}")));
                let (m, n, nnz) = (parse(fields[0])?, parse(fields[1])?, parse(fields[2])?);
                if m != n || n == 0 {
                    return Err(err(ln, format!("matrix must be square and nonempty, got {m}x{n}")));
                }
                size = Some((n, nnz));
                triplets.reserve(nnz);
            }
            Some((n, _)) => {
                if fields.len() != 3 {
                    return Err(err(ln, "entry must be `row col value`"));
                }
                let index = |s: &str| -> Result<usize, KrylovError> {
                    let v: usize = s.parse().map_err(|_| err(ln, format!("bad index {s:?}")))?;
                    if v == 0 || v > n {
                        return Err(err(ln, format!("index {v} outside 1..={n}")));
                    }
                    Ok(v - 1)
                };
                let (i, j) = (index(fields[0])?, index(fields[1])?);
                let value = ctx.parse(fields[2]).map_err(|e| err(ln, e.to_string()))?;
                triplets.push((i.max(j), i.min(j), value));
            }
        }
    }
    let (n, nnz) = size.ok_or_else(|| err(1, "missing size line"))?;
    if triplets.len() != nnz {
        return Err(err(
            0,
            format!("size line announces {nnz} entries, found {}", triplets.len()),
        ));
    }
    Ok(SparseSymmetric::from_triplets(n, triplets))
}

/// Writes the lower triangle with `digits` significant digits.
pub fn write_matrix_market<W: Write>(
    mut out: W,
    a: &SparseSymmetric,
    digits: usize,
) -> std::io::Result<()> {
    use super::LinearOperator;
    writeln!(out, "%%MatrixMarket matrix coordinate real symmetric")?;
    writeln!(out, "{} {} {}", a.dim(), a.dim(), a.nnz_lower())?;
    for (i, j, v) in a.lower_triplets() {
        writeln!(out, "{} {} {}", i + 1, j + 1, v.to_decimal(digits))?;
    }
    Ok(())
}

/// Checks the cheap necessary conditions for positive definiteness.
pub fn validate_spd_candidate(a: &SparseSymmetric, ctx: &PrecisionContext) -> Result<(), KrylovError> {
    for (i, d) in a.diagonal(ctx).iter().enumerate() {
        if !d.is_positive() {
            return Err(KrylovError::NotSpd {
                k: 0,
                value: format!("diagonal entry {} is {}", i + 1, d.to_decimal(17)),
            });
        }
    }
    Ok(())
}

/// `n` copies of `1/sqrt(n)`.
pub fn normalized_ones(n: usize, ctx: &PrecisionContext) -> Vec<Real> {
    let v = ctx.int(n as i64).sqrt().recip();
    vec![v; n]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::krylov::LinearOperator;

    #[test]
    fn identity_is_accepted() {
        let ctx = PrecisionContext::native();
        let text = "%%MatrixMarket matrix coordinate real symmetric\n% comment\n2 2 2\n1 1 1.0\n2 2 1.0\n";
        let a = read_matrix_market(text.as_bytes(), &ctx).unwrap();
        assert_eq!(a.dim(), 2);
        let x = vec![ctx.real(3.0), ctx.real(-1.0)];
        assert_eq!(a.apply(&x), x);
        validate_spd_candidate(&a, &ctx).unwrap();
    }

    #[test]
    fn rejects_pattern_and_general() {
        let ctx = PrecisionContext::native();
        let pattern = "%%MatrixMarket matrix coordinate pattern symmetric\n2 2 2\n1 1\n2 2\n";
        assert!(read_matrix_market(pattern.as_bytes(), &ctx).is_err());
        let general = "%%MatrixMarket matrix coordinate real general\n1 1 1\n1 1 2\n";
        assert!(read_matrix_market(general.as_bytes(), &ctx).is_err());
    }

    #[test]
    fn reports_line_numbers() {
        let ctx = PrecisionContext::native();
        let text = "%%MatrixMarket matrix coordinate real symmetric\n2 2 2\n1 1 1.0\n3 1 1.0\n";
        match read_matrix_market(text.as_bytes(), &ctx) {
            Err(KrylovError::MatrixMarket { line, .. }) => assert_eq!(line, 4),
            other => panic!("unexpected {other:?}"),
        }
        let text = "%%MatrixMarket matrix coordinate real symmetric\n2 2 3\n1 1 1.0\n2 2 1.0\n";
        assert!(read_matrix_market(text.as_bytes(), &ctx).is_err());
    }

    #[test]
    fn write_then_read() {
        let ctx = PrecisionContext::with_digits(40).unwrap();
        let a = SparseSymmetric::from_triplets(
            3,
            vec![
                (0, 0, ctx.int(4)),
                (1, 0, ctx.ratio(1, 3)),
                (1, 1, ctx.int(5)),
                (2, 2, ctx.int(6)),
            ],
        );
        let mut buf = Vec::new();
        write_matrix_market(&mut buf, &a, 40).unwrap();
        let b = read_matrix_market(buf.as_slice(), &ctx).unwrap();
        let x = vec![ctx.one(), ctx.int(2), ctx.int(3)];
        for (u, v) in a.apply(&x).iter().zip(b.apply(&x)) {
            assert!(u.rel_diff(&v) < ctx.pow10(-38));
        }
    }
}
