//! Deterministic codec between structured parameters and flat genome vectors.
//!
//! The segment order of a layout is fixed by its constructor and must never
//! change once genomes exist: evolved individuals are only portable as long
//! as the flat ordering stays stable.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub name: String,
    pub shape: Vec<usize>,
}

impl Segment {
    pub fn new(name: &str, shape: &[usize]) -> Self {
        Segment {
            name: name.to_string(),
            shape: shape.to_vec(),
        }
    }

    pub fn len(&self) -> usize {
        self.shape.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParamLayout {
    pub segments: Vec<Segment>,
}

impl ParamLayout {
    pub fn new(segments: Vec<Segment>) -> Self {
        ParamLayout { segments }
    }

    pub fn total_len(&self) -> usize {
        self.segments.iter().map(|s| s.len()).sum()
    }

    /// Start offset of each segment in the flat vector.
    pub fn offsets(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.segments.len());
        let mut acc = 0;
        for s in &self.segments {
            out.push(acc);
            acc += s.len();
        }
        out
    }

    /// Concatenates structured parameter slices in layout order.
    pub fn flatten(&self, parts: &[&[f64]]) -> Result<Vec<f64>> {
        if parts.len() != self.segments.len() {
            return Err(Error::Config(format!(
                "flatten: expected {} segments, got {}",
                self.segments.len(),
                parts.len()
            )));
        }
        let mut flat = Vec::with_capacity(self.total_len());
        for (seg, part) in self.segments.iter().zip(parts) {
            if part.len() != seg.len() {
                return Err(Error::Config(format!(
                    "flatten: segment '{}' expects {} values, got {}",
                    seg.name,
                    seg.len(),
                    part.len()
                )));
            }
            flat.extend_from_slice(part);
        }
        Ok(flat)
    }

    /// Splits a flat vector back into per-segment slices.
    pub fn split<'a>(&self, flat: &'a [f64]) -> Result<Vec<&'a [f64]>> {
        if flat.len() != self.total_len() {
            return Err(Error::Config(format!(
                "unflatten: expected {} values, got {}",
                self.total_len(),
                flat.len()
            )));
        }
        let mut out = Vec::with_capacity(self.segments.len());
        let mut off = 0;
        for seg in &self.segments {
            out.push(&flat[off..off + seg.len()]);
            off += seg.len();
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> ParamLayout {
        ParamLayout::new(vec![Segment::new("w", &[2, 2]), Segment::new("b", &[2])])
    }

    #[test]
    fn total_len_and_offsets() {
        let l = small();
        assert_eq!(l.total_len(), 6);
        assert_eq!(l.offsets(), vec![0, 4]);
    }

    #[test]
    fn round_trip_is_exact() {
        let l = small();
        let w = [1.0, -2.5, 3.0, 4.0];
        let b = [0.5, -0.5];
        let flat = l.flatten(&[&w, &b]).unwrap();
        let parts = l.split(&flat).unwrap();
        assert_eq!(parts[0], &w);
        assert_eq!(parts[1], &b);
    }

    #[test]
    fn single_flat_mutation_hits_one_structured_entry() {
        let l = small();
        let base = l.flatten(&[&[0.0; 4], &[0.0; 2]]).unwrap();
        for k in 0..l.total_len() {
            let mut flat = base.clone();
            flat[k] = 1.0;
            let parts = l.split(&flat).unwrap();
            let changed: usize = parts
                .iter()
                .map(|p| p.iter().filter(|v| **v != 0.0).count())
                .sum();
            assert_eq!(changed, 1, "flat index {k}");
        }
    }

    #[test]
    fn wrong_length_rejected() {
        let l = small();
        assert!(l.split(&[0.0; 5]).is_err());
        assert!(l.flatten(&[&[0.0; 3], &[0.0; 2]]).is_err());
    }
}
