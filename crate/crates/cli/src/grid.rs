//! Parameter values on the command line: a bare float or a `min:max:n`
//! grid spec expanding to `n` evenly spaced points, endpoints included.

use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ValueOrGrid {
    Single(f64),
    Grid { min: f64, max: f64, count: usize },
}

impl ValueOrGrid {
    /// The represented values, in increasing order.
    pub fn values(&self) -> Vec<f64> {
        match *self {
            ValueOrGrid::Single(v) => vec![v],
            ValueOrGrid::Grid { min, max, count } => (0..count)
                .map(|i| min + (max - min) * i as f64 / (count - 1) as f64)
                .collect(),
        }
    }

    /// The value if this is not a grid.
    pub fn single(&self) -> Option<f64> {
        match *self {
            ValueOrGrid::Single(v) => Some(v),
            ValueOrGrid::Grid { .. } => None,
        }
    }
}

impl FromStr for ValueOrGrid {
    type Err = String;

    fn from_str(raw: &str) -> Result<Self, Self::Err> {
        let parse = |part: &str| {
            part.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| format!("`{part}` is not a finite number"))
        };
        let parts: Vec<&str> = raw.split(':').collect();
        match parts.as_slice() {
            [value] => Ok(ValueOrGrid::Single(parse(value)?)),
            [min, max, count] => {
                let min = parse(min)?;
                let max = parse(max)?;
                let count: usize = count
                    .trim()
                    .parse()
                    .map_err(|_| format!("`{count}` is not a point count"))?;
                if min >= max {
                    return Err(format!("grid needs min < max, got {min}:{max}"));
                }
                if count < 2 {
                    return Err(format!("grid needs at least 2 points, got {count}"));
                }
                Ok(ValueOrGrid::Grid { min, max, count })
            }
            _ => Err(format!("`{raw}` is neither a value nor a min:max:n grid")),
        }
    }
}
