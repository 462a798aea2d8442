//! Plain-text formats for spacetimes, measures and sampled paths.
//!
//! All formats are line based; `#` starts a comment and blank lines are ignored.
//!
//! Spacetime file:
//!
//! ```text
//! n 3                      # number of points
//! dim 2                    # optional; followed by a `coords` block of n lines
//! coords
//! 0.0 0.0
//! ...
//! labels                   # optional; n lines, one name each
//! a
//! ...
//! weights                  # n lines; optional in generator mode (cell volumes)
//! 1.0
//! ...
//! ell                      # explicit mode: `i j value` with value a number or -inf/inf;
//! 0 1 1.0                  # unlisted pairs are −∞ off the diagonal and 0 on it
//! ```
//!
//! or, instead of the `ell` block, a generator stanza:
//!
//! ```text
//! generator hyperbolic_lp  # or: generator minkowski
//! p 4                      # hyperbolic_lp only
//! extent -0.5 4.5 -2.5 2.5 # lower/upper bound pairs, one per axis (time first)
//! resolution 5 5           # cells per axis
//! ```
//!
//! Measure file: lines `point weight`. Function file: lines `point value` with
//! value a number or -inf/inf; unlisted points are left undefined. Path file: lines `t point` or
//! `t x0 x1 …`; an optional first line `mode index|coords` removes the ambiguity
//! of one-dimensional coordinates.

use std::fmt::Write as _;

use crate::curves::SampledCausalPath;
use crate::error::{Error, Result};
use crate::extended::{ExtReal, ExtendedTime};
use crate::spacetime::{DiscreteSpacetime, GeneratorFamily, GeneratorSpec};
use crate::transport::DiscreteMeasure;

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Non-empty lines with comments stripped, paired with 1-based line numbers.
fn content_lines(text: &str) -> Vec<(usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .filter_map(|(i, l)| {
            let l = l.split('#').next().unwrap_or("");
            let toks: Vec<&str> = l.split_whitespace().collect();
            (!toks.is_empty()).then_some((i + 1, toks))
        })
        .collect()
}

fn num<T: std::str::FromStr>(line: usize, tok: &str, what: &str) -> Result<T> {
    tok.parse().map_err(|_| perr(line, format!("invalid {what} {tok:?}")))
}

fn exact_args<'a>(line: usize, toks: &'a [&'a str], count: usize) -> Result<&'a [&'a str]> {
    if toks.len() != count + 1 {
        return Err(perr(line, format!("`{}` takes {count} argument(s), got {}", toks[0], toks.len() - 1)));
    }
    Ok(&toks[1..])
}

pub fn parse_spacetime(text: &str) -> Result<DiscreteSpacetime> {
    let lines = content_lines(text);
    let mut it = lines.iter().peekable();
    let mut n: Option<usize> = None;
    let mut dim: Option<usize> = None;
    let mut coords: Option<Vec<Vec<f64>>> = None;
    let mut labels: Option<Vec<String>> = None;
    let mut weights: Option<Vec<f64>> = None;
    let mut ell: Option<Vec<Vec<ExtendedTime>>> = None;
    let mut gen_family: Option<(usize, String)> = None;
    let mut gen_p: Option<f64> = None;
    let mut extent: Option<Vec<(f64, f64)>> = None;
    let mut resolution: Option<Vec<usize>> = None;
    let mut last_line = 0;

    let need_n = |n: Option<usize>, line: usize| n.ok_or_else(|| perr(line, "`n` must come first"));

    while let Some((line, toks)) = it.next() {
        let line = *line;
        last_line = line;
        match toks[0] {
            "n" => {
                let v: usize = num(line, exact_args(line, toks, 1)?[0], "point count")?;
                if v == 0 {
                    return Err(perr(line, "spacetime needs at least one point"));
                }
                n = Some(v);
            }
            "dim" => dim = Some(num(line, exact_args(line, toks, 1)?[0], "dimension")?),
            "coords" | "labels" | "weights" => {
                let n = need_n(n, line)?;
                let mut block = Vec::with_capacity(n);
                for _ in 0..n {
                    let Some((l, t)) = it.next() else {
                        return Err(perr(line, format!("`{}` block ends early", toks[0])));
                    };
                    block.push((*l, t));
                }
                match toks[0] {
                    "coords" => {
                        let d = dim.ok_or_else(|| perr(line, "`coords` needs a preceding `dim`"))?;
                        let mut c = Vec::with_capacity(n);
                        for (l, t) in block {
                            if t.len() != d {
                                return Err(perr(l, format!("expected {d} coordinates, got {}", t.len())));
                            }
                            c.push(t.iter().map(|s| num(l, s, "coordinate")).collect::<Result<Vec<f64>>>()?);
                        }
                        coords = Some(c);
                    }
                    "labels" => labels = Some(block.iter().map(|(_, t)| t.join(" ")).collect()),
                    _ => {
                        let mut w = Vec::with_capacity(n);
                        for (l, t) in block {
                            let v: f64 = num(l, exact_args(l, &[&["w"], t.as_slice()].concat(), 1)?[0], "weight")?;
                            if !(v.is_finite() && v >= 0.0) {
                                return Err(perr(l, format!("weight must be finite and nonnegative, got {v}")));
                            }
                            w.push(v);
                        }
                        weights = Some(w);
                    }
                }
            }
            "ell" => {
                let n = need_n(n, line)?;
                let mut m: Vec<Vec<ExtendedTime>> =
                    (0..n).map(|i| (0..n).map(|j| if i == j { ExtendedTime::ZERO } else { ExtendedTime::NEG_INF }).collect()).collect();
                while let Some((l, t)) = it.peek() {
                    if t[0].parse::<usize>().is_err() {
                        break;
                    }
                    let (l, t) = (*l, t.clone());
                    it.next();
                    if t.len() != 3 {
                        return Err(perr(l, "expected `i j value`"));
                    }
                    let (i, j): (usize, usize) = (num(l, t[0], "index")?, num(l, t[1], "index")?);
                    if i >= n || j >= n {
                        return Err(perr(l, format!("index out of range for {n} points")));
                    }
                    m[i][j] = t[2].parse().map_err(|e: String| perr(l, e))?;
                }
                ell = Some(m);
            }
            "generator" => {
                gen_family = Some((line, exact_args(line, toks, 1)?[0].to_string()));
            }
            "p" => gen_p = Some(num(line, exact_args(line, toks, 1)?[0], "exponent")?),
            "extent" => {
                let v = toks[1..].iter().map(|s| num(line, s, "bound")).collect::<Result<Vec<f64>>>()?;
                if v.is_empty() || v.len() % 2 != 0 {
                    return Err(perr(line, "`extent` takes lower/upper pairs"));
                }
                extent = Some(v.chunks(2).map(|c| (c[0], c[1])).collect());
            }
            "resolution" => {
                resolution = Some(toks[1..].iter().map(|s| num(line, s, "resolution")).collect::<Result<Vec<usize>>>()?);
            }
            other => return Err(perr(line, format!("unknown keyword {other:?}"))),
        }
    }

    let wrap = |e: Error| match e {
        Error::Parse { .. } => e,
        other => perr(last_line, other.to_string()),
    };
    match (ell, gen_family) {
        (Some(_), Some((l, _))) => Err(perr(l, "a file holds either `ell` entries or a generator, not both")),
        (None, None) => Err(perr(last_line, "missing `ell` block or generator stanza")),
        (Some(m), None) => {
            let n = need_n(n, last_line)?;
            let w = weights.ok_or_else(|| perr(last_line, "missing `weights` block"))?;
            let mut s = DiscreteSpacetime::from_matrix(m, w).map_err(wrap)?;
            if let Some(c) = coords {
                s = s.with_coords(c).map_err(wrap)?;
            }
            if let Some(l) = labels {
                s = s.with_labels(l).map_err(wrap)?;
            }
            debug_assert_eq!(s.len(), n);
            Ok(s)
        }
        (None, Some((l, fam))) => {
            let family = match fam.as_str() {
                "minkowski" => GeneratorFamily::Minkowski,
                "hyperbolic_lp" => GeneratorFamily::HyperbolicLp(gen_p.ok_or_else(|| perr(l, "hyperbolic_lp needs `p`"))?),
                other => return Err(perr(l, format!("unknown generator family {other:?}"))),
            };
            let spec = GeneratorSpec {
                family,
                extent: extent.ok_or_else(|| perr(l, "generator needs `extent`"))?,
                resolution: resolution.ok_or_else(|| perr(l, "generator needs `resolution`"))?,
            };
            let mut s = DiscreteSpacetime::from_generator(&spec).map_err(|e| perr(l, e.to_string()))?;
            if let Some(n) = n {
                if n != s.len() {
                    return Err(perr(l, format!("generator yields {} points but n = {n}", s.len())));
                }
            }
            if let Some(w) = weights {
                s = s.with_weights(w).map_err(wrap)?;
            }
            if let Some(lb) = labels {
                s = s.with_labels(lb).map_err(wrap)?;
            }
            Ok(s)
        }
    }
}

/// Writes a spacetime; generated spacetimes keep their stanza, everything else
/// is written as explicit `ℓ` entries (shortest round-trip float formatting).
pub fn write_spacetime(space: &DiscreteSpacetime) -> String {
    let n = space.len();
    let mut s = String::new();
    writeln!(s, "n {n}").unwrap();
    let explicit = space.generator().is_none();
    if explicit && space.has_coords() {
        writeln!(s, "dim {}\ncoords", space.dim()).unwrap();
        for i in 0..n {
            let c: Vec<String> = space.coords(i).unwrap().iter().map(|x| format!("{x:?}")).collect();
            writeln!(s, "{}", c.join(" ")).unwrap();
        }
    }
    if let Some(l) = space.labels() {
        s.push_str("labels\n");
        for x in l {
            writeln!(s, "{x}").unwrap();
        }
    }
    s.push_str("weights\n");
    for w in space.weights() {
        writeln!(s, "{w:?}").unwrap();
    }
    match space.generator() {
        None => {
            s.push_str("ell\n");
            for i in 0..n {
                for j in 0..n {
                    let v = space.ell(i, j);
                    let default = if i == j { ExtendedTime::ZERO } else { ExtendedTime::NEG_INF };
                    if v != default {
                        writeln!(s, "{i} {j} {v}").unwrap();
                    }
                }
            }
        }
        Some(g) => {
            match g.family {
                GeneratorFamily::Minkowski => s.push_str("generator minkowski\n"),
                GeneratorFamily::HyperbolicLp(p) => writeln!(s, "generator hyperbolic_lp\np {p:?}").unwrap(),
            }
            let e: Vec<String> = g.extent.iter().map(|(a, b)| format!("{a:?} {b:?}")).collect();
            let r: Vec<String> = g.resolution.iter().map(|r| r.to_string()).collect();
            writeln!(s, "extent {}\nresolution {}", e.join(" "), r.join(" ")).unwrap();
        }
    }
    s
}

/// Parses `point weight` lines into a measure on `n` points. Weights must sum to one.
pub fn parse_measure(text: &str, n: usize) -> Result<DiscreteMeasure> {
    let mut w = vec![0.0; n];
    let mut last = 0;
    for (line, toks) in content_lines(text) {
        last = line;
        if toks.len() != 2 {
            return Err(perr(line, "expected `point weight`"));
        }
        let i: usize = num(line, toks[0], "point index")?;
        let v: f64 = num(line, toks[1], "weight")?;
        if i >= n {
            return Err(perr(line, format!("point {i} out of range for {n} points")));
        }
        if !(v.is_finite() && v >= 0.0) {
            return Err(perr(line, format!("weight must be finite and nonnegative, got {v}")));
        }
        w[i] += v;
    }
    DiscreteMeasure::new(w).map_err(|e| perr(last, e.to_string()))
}

/// Parses `point value` lines into a partial function on `n` points.
pub fn parse_function(text: &str, n: usize) -> Result<Vec<Option<ExtReal>>> {
    let mut f = vec![None; n];
    for (line, toks) in content_lines(text) {
        if toks.len() != 2 {
            return Err(perr(line, "expected `point value`"));
        }
        let i: usize = num(line, toks[0], "point index")?;
        if i >= n {
            return Err(perr(line, format!("point {i} out of range for {n} points")));
        }
        let v = match toks[1] {
            "-inf" => ExtReal::NegInf,
            "inf" | "+inf" => ExtReal::PosInf,
            t => {
                let v: f64 = num(line, t, "value")?;
                if !v.is_finite() {
                    return Err(perr(line, "use -inf/inf for infinite values"));
                }
                ExtReal::Finite(v)
            }
        };
        if f[i].replace(v).is_some() {
            return Err(perr(line, format!("point {i} listed twice")));
        }
    }
    Ok(f)
}

pub fn write_function(f: &[Option<ExtReal>]) -> String {
    let mut s = String::new();
    for (i, v) in f.iter().enumerate() {
        match v {
            Some(ExtReal::Finite(x)) => writeln!(s, "{i} {x:?}").unwrap(),
            Some(ExtReal::NegInf) => writeln!(s, "{i} -inf").unwrap(),
            Some(ExtReal::PosInf) => writeln!(s, "{i} inf").unwrap(),
            None => {}
        }
    }
    s
}

pub fn write_measure(mu: &DiscreteMeasure) -> String {
    let mut s = String::new();
    for (i, w) in mu.weights().iter().enumerate().filter(|(_, w)| **w > 0.0) {
        writeln!(s, "{i} {w:?}").unwrap();
    }
    s
}

pub fn parse_path(text: &str) -> Result<SampledCausalPath> {
    let mut lines = content_lines(text);
    let mut mode: Option<bool> = None; // Some(true) = indices
    if let Some((l, t)) = lines.first() {
        if t[0] == "mode" {
            mode = Some(match exact_args(*l, t, 1)?[0] {
                "index" => true,
                "coords" => false,
                other => return Err(perr(*l, format!("unknown path mode {other:?}"))),
            });
            lines.remove(0);
        }
    }
    let Some((first, _)) = lines.first() else {
        return Err(perr(1, "path file has no samples"));
    };
    let first = *first;
    let indices = mode.unwrap_or_else(|| lines.iter().all(|(_, t)| t.len() == 2 && t[1].parse::<usize>().is_ok()));
    let mut times = Vec::with_capacity(lines.len());
    let mut idx = Vec::new();
    let mut coords = Vec::new();
    for (l, t) in &lines {
        if t.len() < 2 {
            return Err(perr(*l, "expected `t point` or `t x0 x1 …`"));
        }
        times.push(num::<f64>(*l, t[0], "time")?);
        if indices {
            if t.len() != 2 {
                return Err(perr(*l, "expected `t point`"));
            }
            idx.push(num::<usize>(*l, t[1], "point index")?);
        } else {
            coords.push(t[1..].iter().map(|s| num(*l, s, "coordinate")).collect::<Result<Vec<f64>>>()?);
        }
    }
    let r = if indices { SampledCausalPath::from_indices(times, idx) } else { SampledCausalPath::from_coords(times, coords) };
    r.map_err(|e| perr(first, e.to_string()))
}

pub fn write_path(path: &SampledCausalPath) -> String {
    use crate::curves::PathPoints;
    let mut s = String::new();
    match path.points() {
        PathPoints::Indices(ix) => {
            s.push_str("mode index\n");
            for (t, i) in path.times().iter().zip(ix) {
                writeln!(s, "{t:?} {i}").unwrap();
            }
        }
        PathPoints::Coords(cs) => {
            s.push_str("mode coords\n");
            for (t, c) in path.times().iter().zip(cs) {
                let c: Vec<String> = c.iter().map(|x| format!("{x:?}")).collect();
                writeln!(s, "{t:?} {}", c.join(" ")).unwrap();
            }
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn function_round_trip_keeps_infinities() {
        let text = "0 1.5\n2 -inf # no value at 1\n3 inf\n";
        let f = parse_function(text, 4).unwrap();
        assert_eq!(f, vec![Some(ExtReal::Finite(1.5)), None, Some(ExtReal::NegInf), Some(ExtReal::PosInf)]);
        assert_eq!(parse_function(&write_function(&f), 4).unwrap(), f);
        assert!(matches!(parse_function("0 1\n0 2", 4), Err(Error::Parse { line: 2, .. })));
    }

    const CHAIN: &str = "# three-point chain\nn 3\nweights\n1\n0.5\n0\nell\n0 1 1.0\n1 2 1\n0 2 2.5\n0 0 inf\n";

    #[test]
    fn explicit_file_round_trips() {
        let s = parse_spacetime(CHAIN).unwrap();
        assert_eq!(s.ell(0, 2), ExtendedTime::finite(2.5).unwrap());
        assert_eq!(s.ell(2, 0), ExtendedTime::NEG_INF);
        assert_eq!(s.ell(0, 0), ExtendedTime::POS_INF);
        let text = write_spacetime(&s);
        let back = parse_spacetime(&text).unwrap();
        assert_eq!(back.ell_matrix(), s.ell_matrix());
        assert_eq!(back.weights(), s.weights());
        assert_eq!(write_spacetime(&back), text);
    }

    #[test]
    fn awkward_floats_survive_the_round_trip() {
        let g = DiscreteSpacetime::hyperbolic_lp_grid(4.0, 2, &[(0.0, 1.0), (-0.3, 0.3)], &[3, 3]).unwrap();
        let s = g.materialize().with_labels((0..9).map(|i| format!("p{i}")).collect()).unwrap();
        let back = parse_spacetime(&write_spacetime(&s)).unwrap();
        assert_eq!(back.ell_matrix(), s.ell_matrix());
        assert_eq!(back.labels(), s.labels());
        assert_eq!(back.coords(4), s.coords(4));
    }

    #[test]
    fn generator_stanza() {
        let text = "n 25\ngenerator hyperbolic_lp\np 2\nextent -0.5 4.5 -2.5 2.5\nresolution 5 5\n";
        let s = parse_spacetime(text).unwrap();
        let m = DiscreteSpacetime::minkowski_grid(2, &[(-0.5, 4.5), (-2.5, 2.5)], &[5, 5]).unwrap();
        assert_eq!(s.ell_matrix(), m.ell_matrix());
        assert_eq!(parse_spacetime(&write_spacetime(&s)).unwrap().generator(), s.generator());
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let bad = "n 2\nweights\n1\n1\nell\n0 1 -2\n";
        assert!(matches!(parse_spacetime(bad), Err(Error::Parse { line: 6, .. })));
        assert!(matches!(parse_spacetime("weights\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_spacetime("n 2\nfoo\n"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn measure_and_path_files() {
        let m = parse_measure("0 0.25\n2 0.75\n", 3).unwrap();
        assert_eq!(m.weights(), &[0.25, 0.0, 0.75]);
        assert_eq!(parse_measure(&write_measure(&m), 3).unwrap(), m);
        assert!(matches!(parse_measure("0 0.5\n", 3), Err(Error::Parse { .. })));
        let p = parse_path("0 0\n0.5 1\n1 2\n").unwrap();
        assert_eq!(p.indices(), Some(&[0usize, 1, 2][..]));
        let c = parse_path("0 0 0\n1 2.0 0.5\n").unwrap();
        assert_eq!(parse_path(&write_path(&c)).unwrap().times(), c.times());
        assert!(parse_path("mode coords\n0 0\n1 1\n").unwrap().indices().is_none());
    }
}
