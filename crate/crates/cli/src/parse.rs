//! Small text formats accepted on the command line.

use frobenius_core::exact::parse_rational;
use frobenius_core::Rational;

pub fn usize_list(s: &str) -> Result<Vec<usize>, String> {
    s.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| format!("expected a comma-separated list of counts, got {s:?}")))
        .collect()
}

pub fn rational_list(s: &str) -> Result<Vec<Rational>, String> {
    s.split(',').map(|t| parse_rational(t.trim()).map_err(|e| e.to_string())).collect()
}

/// `"n,m"` as used by `--parabolic`.
pub fn pair(s: &str) -> Result<(usize, usize), String> {
    match usize_list(s)?.as_slice() {
        [a, b] => Ok((*a, *b)),
        _ => Err(format!("expected two numbers n,m, got {s:?}")),
    }
}

/// `"0-1,1-2"` for undirected edges or `"0>1,2>1"` for arcs. An empty string
/// is an empty list.
pub fn edge_list(s: &str, sep: char) -> Result<Vec<(usize, usize)>, String> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            let (a, b) = t
                .trim()
                .split_once(sep)
                .ok_or_else(|| format!("expected `a{sep}b`, got {t:?}"))?;
            let a = a.trim().parse().map_err(|_| format!("bad vertex in {t:?}"))?;
            let b = b.trim().parse().map_err(|_| format!("bad vertex in {t:?}"))?;
            Ok((a, b))
        })
        .collect()
}

/// Root pairs `"7>4,6>3"`; `-` is accepted in place of `>`.
pub fn root_pairs(s: &str) -> Result<Vec<(usize, usize)>, String> {
    edge_list(&s.replace('-', ">"), '>')
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists() {
        assert_eq!(usize_list("3, 2,2").unwrap(), vec![3, 2, 2]);
        assert!(usize_list("3,x").is_err());
        assert_eq!(pair("7,3").unwrap(), (7, 3));
        assert!(pair("7").is_err());
        assert_eq!(edge_list("0-1,1-2", '-').unwrap(), vec![(0, 1), (1, 2)]);
        assert_eq!(edge_list("", '-').unwrap(), vec![]);
        assert_eq!(root_pairs("7>4,6-3").unwrap(), vec![(7, 4), (6, 3)]);
        assert_eq!(rational_list("0,-1/2,3").unwrap().len(), 3);
    }
}
