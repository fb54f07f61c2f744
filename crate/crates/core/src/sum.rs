/// Neumaier-compensated accumulator. Terms are consumed in call order, so a
/// fixed iteration order gives bit-identical results.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

pub fn compensated<I: IntoIterator<Item = f64>>(terms: I) -> f64 {
    let mut acc = CompensatedSum::new();
    for t in terms {
        acc.add(t);
    }
    acc.value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_terms() {
        let v = compensated([1.0, 1e100, 1.0, -1e100]);
        assert_eq!(v, 2.0);
    }
}
