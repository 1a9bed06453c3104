//! Parsers for complex numbers and grid strings.

use intellistate::C64;

use crate::CliError;

/// Parses `a`, `bi`, `a+bi`, `a-bi`, `i`, `-i`, with `j` accepted for `i`.
pub fn parse_complex(text: &str) -> Result<C64, CliError> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || CliError::Usage(format!("cannot parse complex number '{text}'"));
    if s.is_empty() {
        return Err(bad());
    }
    let (re, im) = match s.strip_suffix(['i', 'j']) {
        None => (s.parse::<f64>().map_err(|_| bad())?, 0.0),
        Some(body) => split_imaginary(body).ok_or_else(bad)?,
    };
    let z = C64::new(re, im);
    if !z.is_finite() {
        return Err(bad());
    }
    Ok(z)
}

fn split_imaginary(body: &str) -> Option<(f64, f64)> {
    let coefficient = |t: &str| match t {
        "" | "+" => Some(1.0),
        "-" => Some(-1.0),
        _ => t.parse::<f64>().ok(),
    };
    // The split is the last sign that is not leading and not an exponent sign.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => Some((body[..k].parse::<f64>().ok()?, coefficient(&body[k..])?)),
        None => Some((0.0, coefficient(body)?)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Axis {
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        let step = (self.max - self.min) / (self.count - 1) as f64;
        (0..self.count)
            .map(|k| if k + 1 == self.count { self.max } else { self.min + step * k as f64 })
            .collect()
    }
}

/// `LxMIN:LxMAX:N,LyMIN:LyMAX:N`, inclusive on both ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub x: Axis,
    pub y: Axis,
}

impl Grid {
    /// Points in row-major order: `Λ_x` is the slow index.
    pub fn points(&self) -> Vec<C64> {
        let ys = self.y.values();
        self.x
            .values()
            .into_iter()
            .flat_map(|x| ys.iter().map(move |&y| C64::new(x, y)))
            .collect()
    }
}

impl std::fmt::Display for Grid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}:{}:{},{}:{}:{}",
            self.x.min, self.x.max, self.x.count, self.y.min, self.y.max, self.y.count
        )
    }
}

pub fn parse_grid(text: &str) -> Result<Grid, CliError> {
    let bad = |why: &str| CliError::Usage(format!("bad grid '{text}': {why}"));
    let axes: Vec<&str> = text.split(',').map(str::trim).collect();
    if axes.len() != 2 {
        return Err(bad("expected two comma-separated axes"));
    }
    let axis = |spec: &str| -> Result<Axis, CliError> {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("each axis is MIN:MAX:N"));
        }
        let min: f64 = parts[0].parse().map_err(|_| bad("MIN is not a number"))?;
        let max: f64 = parts[1].parse().map_err(|_| bad("MAX is not a number"))?;
        let count: usize = parts[2].parse().map_err(|_| bad("N is not a positive integer"))?;
        if count == 0 {
            return Err(bad("N must be at least 1"));
        }
        if !min.is_finite() || !max.is_finite() || max < min {
            return Err(bad("need finite MIN <= MAX"));
        }
        Ok(Axis { min, max, count })
    };
    Ok(Grid {
        x: axis(axes[0])?,
        y: axis(axes[1])?,
    })
}
