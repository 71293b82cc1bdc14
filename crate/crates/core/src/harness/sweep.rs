use super::HarnessError;

pub const DEGREE_GRAMMAR: &str = "\
comma-separated items, each one of
  N            a single degree
  2^K          a power of two
  A..B         A, 2A, 4A, ... up to B (A and B may be written 2^K)";

/// Parses a degree sweep such as `2^4..2^12`, `16,64,144` or `8..64`.
pub fn parse_degrees(s: &str) -> Result<Vec<usize>, HarnessError> {
    let err = |why: String| HarnessError::Spec(format!("degrees `{s}`: {why}"));
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim).filter(|i| !i.is_empty()) {
        match item.split_once("..") {
            Some((a, b)) => {
                let (a, b) = (atom(a).map_err(err)?, atom(b).map_err(err)?);
                if a > b {
                    return Err(err(format!("empty range {a}..{b}")));
                }
                let mut d = a;
                while d <= b {
                    out.push(d);
                    d = match d.checked_mul(2) {
                        Some(x) => x,
                        None => break,
                    };
                }
            }
            None => out.push(atom(item).map_err(err)?),
        }
    }
    if out.is_empty() {
        return Err(err("no degrees".into()));
    }
    Ok(out)
}

fn atom(s: &str) -> Result<usize, String> {
    let s = s.trim();
    let d = match s.split_once('^') {
        Some((base, k)) => {
            if base.trim() != "2" {
                return Err(format!("only powers of 2 are supported, got `{s}`"));
            }
            let k: u32 = k.trim().parse().map_err(|e| format!("`{s}`: {e}"))?;
            1usize.checked_shl(k).filter(|_| k < usize::BITS).ok_or_else(|| format!("`{s}` is too large"))?
        }
        None => s.parse().map_err(|e| format!("`{s}`: {e}"))?,
    };
    if d == 0 {
        return Err("degree must be positive".into());
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grammar() {
        assert_eq!(parse_degrees("2^4..2^7").unwrap(), vec![16, 32, 64, 128]);
        assert_eq!(parse_degrees("16, 64,144").unwrap(), vec![16, 64, 144]);
        assert_eq!(parse_degrees("3..20").unwrap(), vec![3, 6, 12]);
        assert_eq!(parse_degrees("2^10").unwrap(), vec![1024]);
        assert_eq!(parse_degrees("4,2^3..16").unwrap(), vec![4, 8, 16]);
    }

    #[test]
    fn rejects_nonsense() {
        for bad in ["", "0", "3^2", "x", "8..4", "2^99", ","] {
            assert!(parse_degrees(bad).is_err(), "{bad}");
        }
    }
}
