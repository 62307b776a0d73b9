//! Plain-text formats for Jacobi matrices and distribution functions.
//!
//! Jacobi matrix: a header `jacobi <N> <digits>`, then `N` lines with the
//! diagonal and `N-1` lines with the off-diagonal. `digits = 0` marks
//! binary64 data, written as shortest round-trip decimals and read back
//! exactly.
//!
//! Distribution: one `node weight` pair per line, ascending nodes.

use std::io::{BufRead, Write};

use crate::numerics::{JacobiMatrix, PrecisionContext, Real};

use super::{DistributionFunction, SpectrumError};

fn format_value(x: &Real, digits: Option<u32>) -> String {
    match digits {
        None => format!("{:e}", x.to_f64()),
        Some(d) => x.to_decimal(d as usize),
    }
}

/// Writes `t`; `digits = None` writes binary64 values (the header says 0).
pub fn write_jacobi<W: Write>(
    mut out: W,
    t: &JacobiMatrix,
    digits: Option<u32>,
) -> std::io::Result<()> {
    writeln!(out, "jacobi {} {}", t.order(), digits.unwrap_or(0))?;
    for a in t.alphas() {
        writeln!(out, "{}", format_value(a, digits))?;
    }
    for b in t.betas() {
        writeln!(out, "{}", format_value(b, digits))?;
    }
    Ok(())
}

pub fn read_jacobi<R: BufRead>(
    input: R,
    ctx: &PrecisionContext,
) -> Result<JacobiMatrix, SpectrumError> {
    let bad = |line: usize, message: String| SpectrumError::Format {
        what: "jacobi file",
        line,
        message,
    };
    let mut lines = input
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| l.as_ref().map_or(true, |s| !s.trim().is_empty()));

    let (hline, header) = lines
        .next()
        .ok_or_else(|| bad(1, "missing header".into()))?;
    let header = header?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 3 || fields[0] != "jacobi" {
        return Err(bad(hline, format!("expected `jacobi <N> <digits>`, got {header:?}")));
    }
    let n: usize = fields[1]
        .parse()
        .map_err(|_| bad(hline, format!("bad order {:?}", fields[1])))?;
    let digits: u32 = fields[2]
        .parse()
        .map_err(|_| bad(hline, format!("bad digit count {:?}", fields[2])))?;
    if n == 0 {
        return Err(bad(hline, "order must be positive".into()));
    }

    let mut values = Vec::with_capacity(2 * n - 1);
    for _ in 0..2 * n - 1 {
        let (ln, text) = lines
            .next()
            .ok_or_else(|| bad(hline, format!("expected {} values", 2 * n - 1)))?;
        let text = text?;
        let value = if digits == 0 {
            let x: f64 = text
                .trim()
                .parse()
                .map_err(|_| bad(ln, format!("bad binary64 value {text:?}")))?;
            ctx.real(x)
        } else {
            ctx.parse(&text).map_err(|e| bad(ln, e.to_string()))?
        };
        values.push(value);
    }
    if let Some((ln, _)) = lines.next() {
        return Err(bad(ln, "trailing data".into()));
    }
    let betas = values.split_off(n);
    Ok(JacobiMatrix::new(values, betas)?)
}

pub fn write_distribution<W: Write>(
    mut out: W,
    dist: &DistributionFunction,
    digits: usize,
) -> std::io::Result<()> {
    for (x, w) in dist.nodes().iter().zip(dist.weights()) {
        writeln!(out, "{} {}", x.to_decimal(digits), w.to_decimal(digits))?;
    }
    Ok(())
}

pub fn read_distribution<R: BufRead>(
    input: R,
    ctx: &PrecisionContext,
) -> Result<DistributionFunction, SpectrumError> {
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let (Some(x), Some(w), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(SpectrumError::Format {
                what: "distribution file",
                line: i + 1,
                message: "expected `node weight`".into(),
            });
        };
        nodes.push(ctx.parse(x)?);
        weights.push(ctx.parse(w)?);
    }
    DistributionFunction::new(nodes, weights, ctx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_roundtrip_full_precision() {
        let ctx = PrecisionContext::with_digits(60).unwrap();
        let t = JacobiMatrix::new(
            vec![ctx.ratio(1, 3), ctx.ratio(2, 7)],
            vec![ctx.ratio(1, 9)],
        )
        .unwrap();
        let mut buf = Vec::new();
        write_jacobi(&mut buf, &t, Some(60)).unwrap();
        let back = read_jacobi(buf.as_slice(), &ctx).unwrap();
        for (a, b) in t.alphas().iter().zip(back.alphas()) {
            assert!(a.rel_diff(b) < ctx.pow10(-58));
        }
    }

    #[test]
    fn jacobi_native_roundtrip_is_exact() {
        let ctx = PrecisionContext::with_digits(60).unwrap();
        let t = JacobiMatrix::new(
            vec![ctx.ratio(1, 3), ctx.ratio(2, 7)],
            vec![ctx.ratio(1, 9)],
        )
        .unwrap()
        .to_native(&ctx);
        let mut buf = Vec::new();
        write_jacobi(&mut buf, &t, None).unwrap();
        assert!(buf.starts_with(b"jacobi 2 0\n"));
        assert_eq!(read_jacobi(buf.as_slice(), &ctx).unwrap(), t);
    }

    #[test]
    fn jacobi_format_errors() {
        let ctx = PrecisionContext::native();
        assert!(read_jacobi("jacobi 2 0\n1\n".as_bytes(), &ctx).is_err());
        assert!(read_jacobi("matrix 1 0\n1\n".as_bytes(), &ctx).is_err());
        assert!(read_jacobi("jacobi 1 0\n1\n2\n".as_bytes(), &ctx).is_err());
        let err = read_jacobi("jacobi 2 0\n1\nx\n1\n".as_bytes(), &ctx).unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
    }

    #[test]
    fn distribution_roundtrip() {
        let ctx = PrecisionContext::with_digits(30).unwrap();
        let d = DistributionFunction::uniform(vec![ctx.one(), ctx.int(2), ctx.int(4)], &ctx).unwrap();
        let mut buf = Vec::new();
        write_distribution(&mut buf, &d, 30).unwrap();
        let back = read_distribution(buf.as_slice(), &ctx).unwrap();
        assert_eq!(back.nodes(), d.nodes());
        assert!(read_distribution("1 0.5 3\n".as_bytes(), &ctx).is_err());
    }
}
