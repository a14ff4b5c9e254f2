//! Output formats of the `medqmc` command-line tool.

pub mod plot;
pub mod records;

/// Inclusive range of m values.
#[derive(Clone, Debug, PartialEq)]
pub struct MRange(pub Vec<usize>);

/// Parses `a:b` (inclusive) or a single `m`.
pub fn parse_m_range(s: &str) -> Result<MRange, String> {
    let bad = || format!("expected m or a:b with 1 <= a <= b, got {s:?}");
    let (a, b) = match s.split_once(':') {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
        None => {
            let m = s.trim().parse().map_err(|_| bad())?;
            (m, m)
        }
    };
    if a == 0 || a > b {
        return Err(bad());
    }
    Ok(MRange((a..=b).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn m_ranges() {
        assert_eq!(parse_m_range("6:16").unwrap().0.len(), 11);
        assert_eq!(parse_m_range("4").unwrap().0, vec![4]);
        assert!(parse_m_range("5:3").is_err());
        assert!(parse_m_range("0:3").is_err());
        assert!(parse_m_range("a:b").is_err());
    }
}
