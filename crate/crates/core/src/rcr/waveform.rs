use crate::error::{Error, Result};
use crate::scalar::Real;

/// A sampled periodic signal, interpreted as piecewise linear with a
/// periodic wrap from the last sample back to the first one (shifted by one
/// period).
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicWaveform<T> {
    period: T,
    times: Vec<T>,
    values: Vec<T>,
}

/// Which one-sided limit to take for the slope at a knot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl<T: Real> PeriodicWaveform<T> {
    pub fn new(period: T, samples: Vec<(T, T)>) -> Result<Self> {
        let (times, values): (Vec<T>, Vec<T>) = samples.into_iter().unzip();
        Self::from_parts(period, times, values)
    }

    pub fn from_parts(period: T, times: Vec<T>, values: Vec<T>) -> Result<Self> {
        if !(period.is_finite() && period > T::zero()) {
            return Err(Error::InvalidWaveform(format!("period must be positive, got {period}")));
        }
        if times.len() != values.len() {
            return Err(Error::LengthMismatch { expected: times.len(), found: values.len() });
        }
        if times.len() < 2 {
            return Err(Error::InvalidWaveform("at least 2 samples required".into()));
        }
        for (i, (&t, &v)) in times.iter().zip(&values).enumerate() {
            if !t.is_finite() || !v.is_finite() {
                return Err(Error::InvalidWaveform(format!("sample {i} is not finite")));
            }
            if t < T::zero() || t >= period {
                return Err(Error::InvalidWaveform(format!("sample time {t} outside [0, {period})")));
            }
            if i > 0 && t <= times[i - 1] {
                return Err(Error::InvalidWaveform(format!("sample times not strictly increasing at index {i}")));
            }
        }
        Ok(Self { period, times, values })
    }

    /// Samples `n` points uniformly over one period starting at 0.
    pub fn from_fn(period: T, n: usize, f: impl Fn(T) -> T) -> Result<Self> {
        let dt = period / T::of_usize(n);
        let times: Vec<T> = (0..n).map(|i| T::of_usize(i) * dt).collect();
        let values = times.iter().map(|&t| f(t)).collect();
        Self::from_parts(period, times, values)
    }

    /// Constant signal.
    pub fn constant(period: T, value: T) -> Self {
        Self { period, times: vec![T::zero(), period * T::half()], values: vec![value, value] }
    }

    pub fn period(&self) -> T {
        self.period
    }

    pub fn times(&self) -> &[T] {
        &self.times
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Reduces `t` into `[0, T)`.
    fn wrap(&self, t: T) -> T {
        let mut u = t % self.period;
        if u < T::zero() {
            u += self.period;
        }
        if u >= self.period {
            u = T::zero();
        }
        u
    }

    /// Segment `(t0, v0, t1, v1)` containing `u` (already wrapped). The wrap
    /// segment runs from the last sample to the first sample plus one period;
    /// `u` is shifted into its coordinate frame when needed.
    fn segment(&self, u: T, side: Side) -> (T, T, T, T, T) {
        let n = self.times.len();
        let first = self.times[0];
        let last = self.times[n - 1];
        let in_wrap = match side {
            Side::Right => u < first || u >= last,
            Side::Left => u <= first || u > last,
        };
        if in_wrap {
            let shifted = if u <= first { u + self.period } else { u };
            return (shifted, last, self.values[n - 1], first + self.period, self.values[0]);
        }
        // index of the segment start: largest i with times[i] <= u (right) or < u (left)
        let i = match side {
            Side::Right => self.times.partition_point(|&t| t <= u) - 1,
            Side::Left => self.times.partition_point(|&t| t < u) - 1,
        };
        (u, self.times[i], self.values[i], self.times[i + 1], self.values[i + 1])
    }

    pub fn value_at(&self, t: T) -> T {
        let u = self.wrap(t);
        let (x, t0, v0, t1, v1) = self.segment(u, Side::Right);
        v0 + (v1 - v0) * (x - t0) / (t1 - t0)
    }

    /// Exact slope of the linear interpolant. At a knot, `side` selects the
    /// one-sided limit.
    pub fn slope_at(&self, t: T, side: Side) -> T {
        let u = self.wrap(t);
        let (_, t0, v0, t1, v1) = self.segment(u, side);
        (v1 - v0) / (t1 - t0)
    }

    /// Time average over one period (exact integral of the interpolant).
    pub fn mean(&self) -> T {
        let n = self.times.len();
        let mut area = T::zero();
        for i in 0..n - 1 {
            area += (self.times[i + 1] - self.times[i]) * (self.values[i] + self.values[i + 1]);
        }
        area += (self.times[0] + self.period - self.times[n - 1]) * (self.values[n - 1] + self.values[0]);
        area * T::half() / self.period
    }

    /// Evaluates the waveform on `n` uniform points of one period.
    pub fn resample(&self, n: usize) -> Vec<T> {
        let dt = self.period / T::of_usize(n);
        (0..n).map(|i| self.value_at(T::of_usize(i) * dt)).collect()
    }

    pub fn scaled(&self, factor: T) -> Self {
        Self {
            period: self.period,
            times: self.times.clone(),
            values: self.values.iter().map(|&v| v * factor).collect(),
        }
    }
}
