//! Deterministic, splittable random source.
//!
//! Every simulation draws exclusively from [`RngStream`], so a run is exactly
//! reproducible from a single 64-bit seed on any platform. The generator is
//! xoshiro256++ (Blackman & Vigna, 2019); the 256-bit state of a stream is
//! expanded with SplitMix64 from the pair `(seed, stream_id)`:
//!
//! ```text
//! sm0       = mix64(seed) + stream_id * 0x9E3779B97F4A7C15   (wrapping)
//! s[0..4]   = four successive SplitMix64 outputs starting from sm0
//! ```
//!
//! where `mix64` is the SplitMix64 finalizer. Distinct `stream_id`s therefore
//! start SplitMix64 at distinct states and yield unrelated xoshiro streams,
//! which is how the scenario engine gives each generation stage its own
//! substream without any shared state.
//!
//! Not cryptographically secure, and not meant to be.

const GOLDEN: u64 = 0x9E3779B97F4A7C15;

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(GOLDEN);
    mix64(*state)
}

/// One independent stream of pseudo-random variates.
///
/// A stream is single-owner: parallel callers must derive disjoint streams
/// via distinct `stream_id`s rather than share one.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    s: [u64; 4],
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut sm = mix64(seed).wrapping_add(stream_id.wrapping_mul(GOLDEN));
        let mut s = [0u64; 4];
        for w in &mut s {
            *w = splitmix64(&mut sm);
        }
        if s == [0, 0, 0, 0] {
            s[0] = GOLDEN; // xoshiro state must not be all zero
        }
        RngStream { seed, stream_id, s }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// A stream derived from this stream's seed with another id.
    pub fn substream(&self, stream_id: u64) -> Self {
        RngStream::new(self.seed, stream_id)
    }

    /// Raw xoshiro256++ output.
    pub fn next_u64(&mut self) -> u64 {
        let result = self.s[0]
            .wrapping_add(self.s[3])
            .rotate_left(23)
            .wrapping_add(self.s[0]);
        let t = self.s[1] << 17;
        self.s[2] ^= self.s[0];
        self.s[3] ^= self.s[1];
        self.s[1] ^= self.s[2];
        self.s[0] ^= self.s[3];
        self.s[2] ^= t;
        self.s[3] = self.s[3].rotate_left(45);
        result
    }

    /// Uniform draw strictly inside (0, 1).
    ///
    /// The top 52 bits are midpoint-scaled: u = (k + 1/2) / 2^52, so the
    /// endpoints 0 and 1 are unreachable (smallest value 2^-53, largest
    /// 1 - 2^-53). Inverse pgfs and quantile functions diverge at the
    /// endpoints, so this is a hard contract, not a nicety.
    pub fn uniform(&mut self) -> f64 {
        ((self.next_u64() >> 12) as f64 + 0.5) * 2f64.powi(-52)
    }

    /// Uniform draw on (a, b).
    pub fn uniform_range(&mut self, a: f64, b: f64) -> f64 {
        assert!(b >= a, "uniform_range requires b >= a");
        a + (b - a) * self.uniform()
    }

    /// Normal draw via the inverse CDF, so one uniform is consumed per
    /// variate and scale equivariance holds exactly: N(m, sd) = m + sd * z.
    pub fn normal(&mut self, mean: f64, sd: f64) -> f64 {
        assert!(sd >= 0.0, "normal requires sd >= 0");
        mean + sd * crate::special::norm_quantile(self.uniform())
    }

    /// Standard exponential draw.
    pub fn exponential(&mut self, rate: f64) -> f64 {
        assert!(rate > 0.0, "exponential requires rate > 0");
        -self.uniform().ln() / rate
    }

    /// Gamma(shape, rate) draw with mean shape/rate.
    ///
    /// Marsaglia & Tsang (2000) squeeze method; shape < 1 is boosted through
    /// Gamma(shape + 1) and a power of a uniform. The rate divides at the
    /// end, so doubling the rate exactly halves the draw for a fixed stream
    /// state.
    pub fn gamma(&mut self, shape: f64, rate: f64) -> f64 {
        assert!(
            shape > 0.0 && rate > 0.0,
            "gamma requires shape > 0 and rate > 0"
        );
        if shape < 1.0 {
            let u = self.uniform();
            return self.gamma_shape_ge1(shape + 1.0) * u.powf(1.0 / shape) / rate;
        }
        self.gamma_shape_ge1(shape) / rate
    }

    fn gamma_shape_ge1(&mut self, shape: f64) -> f64 {
        let d = shape - 1.0 / 3.0;
        let c = 1.0 / (9.0 * d).sqrt();
        loop {
            let x = self.normal(0.0, 1.0);
            let v = 1.0 + c * x;
            if v <= 0.0 {
                continue;
            }
            let v = v * v * v;
            let u = self.uniform();
            if u < 1.0 - 0.0331 * (x * x) * (x * x) {
                return d * v;
            }
            if u.ln() < 0.5 * x * x + d * (1.0 - v + v.ln()) {
                return d * v;
            }
        }
    }

    /// Positive stable PS(alpha) draw: Laplace transform E[e^{-sZ}] = e^{-s^alpha}.
    ///
    /// Chambers–Mallows–Stuck construction with U' uniform on (0, pi) and E
    /// unit exponential:
    ///
    /// ```text
    /// Z = [sin(aU') / sin(U')^{1/a}] * [sin((1-a)U') / E]^{(1-a)/a}
    /// ```
    ///
    /// alpha = 1 is the point mass at 1.
    pub fn positive_stable(&mut self, alpha: f64) -> f64 {
        assert!(
            alpha > 0.0 && alpha <= 1.0,
            "positive_stable requires alpha in (0, 1]"
        );
        if alpha == 1.0 {
            return 1.0;
        }
        let u = std::f64::consts::PI * self.uniform();
        let e = self.exponential(1.0);
        let a = (alpha * u).sin() / u.sin().powf(1.0 / alpha);
        let b = ((1.0 - alpha) * u).sin() / e;
        a * b.powf((1.0 - alpha) / alpha)
    }
}
