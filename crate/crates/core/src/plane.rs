//! Rectangles in the complex plane and uniform sampling over them.

use num_complex::Complex64 as C64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Window {
    pub re: (f64, f64),
    pub im: (f64, f64),
}

impl Window {
    pub fn new(re: (f64, f64), im: (f64, f64)) -> Self {
        Window { re, im }
    }

    /// Square window of half-width `half` around `center`.
    pub fn centered(center: C64, half: f64) -> Self {
        Window { re: (center.re - half, center.re + half), im: (center.im - half, center.im + half) }
    }

    pub fn contains(&self, z: C64) -> bool {
        z.re >= self.re.0 && z.re <= self.re.1 && z.im >= self.im.0 && z.im <= self.im.1
    }

    pub fn center(&self) -> C64 {
        C64::new(0.5 * (self.re.0 + self.re.1), 0.5 * (self.im.0 + self.im.1))
    }

    /// `nx × ny` points, endpoints included, row-major in the imaginary axis.
    pub fn seeds(&self, nx: usize, ny: usize) -> Vec<C64> {
        let xs = linspace(self.re.0, self.re.1, nx);
        let ys = linspace(self.im.0, self.im.1, ny);
        ys.iter().flat_map(|&y| xs.iter().map(move |&x| C64::new(x, y))).collect()
    }

    pub fn cell_area(&self, nx: usize, ny: usize) -> f64 {
        let dx = if nx > 1 { (self.re.1 - self.re.0) / (nx - 1) as f64 } else { self.re.1 - self.re.0 };
        let dy = if ny > 1 { (self.im.1 - self.im.0) / (ny - 1) as f64 } else { self.im.1 - self.im.0 };
        dx * dy
    }
}

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.5 * (a + b)],
        _ => (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect(),
    }
}

/// Order by real part, then imaginary part.
pub fn sort_points(v: &mut [C64]) {
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}
