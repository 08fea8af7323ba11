//! QGM v1 text format.
//!
//! ```text
//! qgm 1
//! darts N
//! a0: <N integers>
//! a1: <N integers>
//! a2: <N integers>
//! ```
//!
//! `#` starts a comment; the integer lists may wrap over several lines.
//! Fixed points of `a2` are boundary darts.

use std::fmt::Write as _;

use thiserror::Error;

use crate::gmap::{Dart, GMap, QuadGMap, ValidationReport};

#[derive(Debug, Error)]
pub enum QgmError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("invalid complex:\n{0}")]
    Invalid(ValidationReport),
}

fn tokens(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .flat_map(|(k, line)| {
            let body = line.split('#').next().unwrap_or("");
            body.split_whitespace().map(move |t| (k + 1, t))
        })
        .collect()
}

pub fn parse_qgm(text: &str) -> Result<QuadGMap, QgmError> {
    let toks = tokens(text);
    let mut it = toks.into_iter().peekable();
    let mut last_line = 1;
    let mut expect = |want: &str, it: &mut std::iter::Peekable<std::vec::IntoIter<(usize, &str)>>| {
        match it.next() {
            Some((line, t)) if t == want => {
                last_line = line;
                Ok(())
            }
            Some((line, t)) => Err(QgmError::Syntax {
                line,
                message: format!("expected `{want}`, found `{t}`"),
            }),
            None => Err(QgmError::Syntax {
                line: last_line,
                message: format!("expected `{want}`, found end of input"),
            }),
        }
    };
    expect("qgm", &mut it)?;
    expect("1", &mut it)?;
    expect("darts", &mut it)?;
    let n: usize = match it.next() {
        Some((line, t)) => t.parse().map_err(|_| QgmError::Syntax {
            line,
            message: format!("bad dart count `{t}`"),
        })?,
        None => {
            return Err(QgmError::Syntax { line: 2, message: "missing dart count".into() })
        }
    };
    let mut arrays: Vec<Vec<Dart>> = Vec::with_capacity(3);
    for name in ["a0:", "a1:", "a2:"] {
        expect(name, &mut it)?;
        let mut values = Vec::with_capacity(n);
        for _ in 0..n {
            match it.next() {
                Some((line, t)) => {
                    let v: Dart = t.parse().map_err(|_| QgmError::Syntax {
                        line,
                        message: format!("bad dart `{t}` in {name}"),
                    })?;
                    if v as usize >= n {
                        return Err(QgmError::Syntax {
                            line,
                            message: format!("dart {v} out of range in {name}"),
                        });
                    }
                    values.push(v);
                }
                None => {
                    return Err(QgmError::Syntax {
                        line: usize::MAX,
                        message: format!("{name} has fewer than {n} entries"),
                    })
                }
            }
        }
        arrays.push(values);
    }
    if let Some((line, t)) = it.next() {
        return Err(QgmError::Syntax { line, message: format!("trailing token `{t}`") });
    }
    let a2 = arrays.pop().unwrap();
    let a1 = arrays.pop().unwrap();
    let a0 = arrays.pop().unwrap();
    let map = GMap::new(a0, a1, a2).expect("lengths and ranges checked above");
    QuadGMap::new(map).map_err(QgmError::Invalid)
}

pub fn write_qgm(q: &QuadGMap) -> String {
    let g = q.gmap();
    let mut out = String::new();
    writeln!(out, "qgm 1").unwrap();
    writeln!(out, "darts {}", g.n_darts()).unwrap();
    for i in 0..3 {
        write!(out, "a{i}:").unwrap();
        for d in g.darts() {
            write!(out, " {}", g.alpha(i, d)).unwrap();
        }
        out.push('\n');
    }
    out
}

/// Reads a marking: one `cycle d1 d2 ...` line per reference cycle, each
/// dart naming one edge of the cycle.
pub fn parse_marking(text: &str) -> Result<Vec<Vec<Dart>>, QgmError> {
    let mut out = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let mut words = line.split('#').next().unwrap_or("").split_whitespace();
        let Some(head) = words.next() else { continue };
        let syntax = |message: String| QgmError::Syntax { line: k + 1, message };
        if head != "cycle" {
            return Err(syntax(format!("expected `cycle`, found `{head}`")));
        }
        let darts = words
            .map(|w| w.parse::<Dart>().map_err(|_| syntax(format!("bad dart `{w}`"))))
            .collect::<Result<Vec<_>, _>>()?;
        out.push(darts);
    }
    Ok(out)
}

pub fn write_marking(cycles: &[Vec<Dart>]) -> String {
    let mut out = String::new();
    for c in cycles {
        out.push_str("cycle");
        for d in c {
            write!(out, " {d}").unwrap();
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::canonical_code;
    use crate::models::*;

    #[test]
    fn exact_layout() {
        let text = write_qgm(&disk_grid(1, 1));
        assert_eq!(
            text,
            "qgm 1\ndarts 8\n\
             a0: 1 0 3 2 5 4 7 6\n\
             a1: 7 2 1 4 3 6 5 0\n\
             a2: 0 1 2 3 4 5 6 7\n"
        );
    }

    #[test]
    fn wrapped_lists_and_comments() {
        let text = "# one square\nqgm 1\ndarts 8\na0: 1 0 3 2\n 5 4 7 6 # wrapped\na1: 7 2 1 4 3 6 5 0\na2: 0 1 2 3 4 5 6 7\n";
        let q = parse_qgm(text).unwrap();
        assert_eq!(q.cell_counts(), (4, 4, 1));
    }

    #[test]
    fn round_trip_keeps_code() {
        for q in [cube_sphere(), grid_torus(2, 3), moebius_strip(2), rp2_min()] {
            let back = parse_qgm(&write_qgm(&q)).unwrap();
            assert_eq!(back, q);
            assert_eq!(canonical_code(&back).unwrap(), canonical_code(&q).unwrap());
        }
    }

    #[test]
    fn rejects_invalid_complex() {
        let text = "qgm 1\ndarts 8\na0: 0 1 3 2 5 4 7 6\na1: 7 2 1 4 3 6 5 0\na2: 0 1 2 3 4 5 6 7\n";
        match parse_qgm(text) {
            Err(QgmError::Invalid(r)) => assert!(r.to_string().contains("a0")),
            other => panic!("expected validation failure, got {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_header() {
        assert!(matches!(parse_qgm("qgm 2\n"), Err(QgmError::Syntax { .. })));
        assert!(matches!(
            parse_qgm("qgm 1\ndarts 8\na0: 1 0\n"),
            Err(QgmError::Syntax { .. })
        ));
    }

    #[test]
    fn marking_round_trip() {
        let cycles = vec![vec![0, 5, 9], vec![2]];
        let text = write_marking(&cycles);
        assert_eq!(text, "cycle 0 5 9\ncycle 2\n");
        assert_eq!(parse_marking(&format!("# m\n{text}\n")).unwrap(), cycles);
        assert!(parse_marking("loop 1 2").is_err());
        assert!(parse_marking("cycle 1 x").is_err());
    }
}
