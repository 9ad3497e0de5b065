//! Parameter grids: `v`, `a,b,c`, `start:stop:xK` (geometric) and
//! `start:stop:+D` (arithmetic). The stop value is included when the
//! progression hits it up to rounding.

use std::str::FromStr;

#[derive(Debug, Clone, PartialEq)]
pub struct Grid(pub Vec<f64>);

const MAX_POINTS: usize = 100_000;

fn number(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("not a number: '{s}'"))?;
    if !v.is_finite() {
        return Err(format!("not a finite number: '{s}'"));
    }
    Ok(v)
}

fn snap(v: f64) -> f64 {
    format!("{v:.13e}").parse().expect("formatted float parses")
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(spec: &str) -> Result<Self, String> {
        let parts: Vec<&str> = spec.split(':').collect();
        match parts.as_slice() {
            [list] => list.split(',').map(number).collect::<Result<_, _>>().map(Grid),
            [start, stop, step] => {
                let (a, b) = (number(start)?, number(stop)?);
                if b < a {
                    return Err(format!("grid '{spec}' runs backwards"));
                }
                let step = step.trim();
                let mut out = Vec::new();
                if let Some(k) = step.strip_prefix('x') {
                    let k = number(k)?;
                    if k <= 1.0 || a <= 0.0 {
                        return Err(format!("geometric grid '{spec}' needs start > 0 and factor > 1"));
                    }
                    let mut v = a;
                    while v <= b * (1.0 + 1e-12) {
                        out.push(v);
                        v *= k;
                        if out.len() > MAX_POINTS {
                            return Err(format!("grid '{spec}' has too many points"));
                        }
                    }
                } else if let Some(d) = step.strip_prefix('+') {
                    let d = number(d)?;
                    if d <= 0.0 {
                        return Err(format!("arithmetic grid '{spec}' needs a positive step"));
                    }
                    let count = ((b - a) / d + 1e-9).floor() as usize + 1;
                    if count > MAX_POINTS {
                        return Err(format!("grid '{spec}' has too many points"));
                    }
                    // snapped to 14 digits so 0.4:2.8:+0.4 ends on 2.8, not 2.8000000000000003
                    out.extend((0..count).map(|i| snap(a + i as f64 * d)));
                } else {
                    return Err(format!("grid step '{step}' must start with 'x' or '+'"));
                }
                Ok(Grid(out))
            }
            _ => Err(format!("bad grid '{spec}'; use v, a,b,c, start:stop:xK or start:stop:+D")),
        }
    }
}

impl Grid {
    /// The points as dimensions; rejects fractional or non-positive values.
    pub fn dims(&self) -> Result<Vec<usize>, String> {
        self.0
            .iter()
            .map(|&v| {
                let r = v.round();
                if r < 1.0 || (v - r).abs() > 1e-9 * v.abs().max(1.0) {
                    Err(format!("n must be a positive integer, got {v}"))
                } else {
                    Ok(r as usize)
                }
            })
            .collect()
    }
}
