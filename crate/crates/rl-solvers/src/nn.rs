use dp_mechanisms::ActivationKind;
use rand::Rng;

/// A small fully-connected network: linear layers with the chosen activation
/// on hidden layers and a linear output. Weights are stored row-major
/// (output x input); gradients use the same flat layout as `params_flat`.
#[derive(Clone, Debug, PartialEq)]
pub struct Mlp {
    sizes: Vec<usize>,
    activation: ActivationKind,
    weights: Vec<Vec<f64>>,
    biases: Vec<Vec<f64>>,
}

/// Cached per-layer values from a forward pass: pre-activations and
/// post-activation outputs, with `post[0]` the input itself.
pub struct ForwardCache {
    pre: Vec<Vec<f64>>,
    post: Vec<Vec<f64>>,
}

impl ForwardCache {
    pub fn output(&self) -> &[f64] {
        self.post.last().expect("cache holds at least the input")
    }
}

impl Mlp {
    /// Fresh network with uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) weights
    /// and zero biases.
    pub fn new<R: Rng + ?Sized>(sizes: &[usize], activation: ActivationKind, rng: &mut R) -> Self {
        assert!(sizes.len() >= 2, "need at least input and output sizes");
        assert!(sizes.iter().all(|&s| s > 0));
        let mut weights = Vec::new();
        let mut biases = Vec::new();
        for l in 1..sizes.len() {
            let fan_in = sizes[l - 1];
            let bound = 1.0 / (fan_in as f64).sqrt();
            let w: Vec<f64> =
                (0..sizes[l] * fan_in).map(|_| rng.random_range(-bound..bound)).collect();
            weights.push(w);
            biases.push(vec![0.0; sizes[l]]);
        }
        Mlp { sizes: sizes.to_vec(), activation, weights, biases }
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn activation(&self) -> ActivationKind {
        self.activation
    }

    pub fn n_inputs(&self) -> usize {
        self.sizes[0]
    }

    pub fn n_outputs(&self) -> usize {
        *self.sizes.last().unwrap()
    }

    fn n_layers(&self) -> usize {
        self.weights.len()
    }

    fn activate(&self, x: f64) -> f64 {
        match self.activation {
            ActivationKind::Rectifier => x.max(0.0),
            ActivationKind::Tanh => x.tanh(),
        }
    }

    fn activate_deriv(&self, pre: f64) -> f64 {
        match self.activation {
            ActivationKind::Rectifier => {
                if pre > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            ActivationKind::Tanh => {
                let t = pre.tanh();
                1.0 - t * t
            }
        }
    }

    pub fn forward(&self, input: &[f64]) -> Vec<f64> {
        self.forward_cached(input).post.pop().unwrap()
    }

    pub fn forward_cached(&self, input: &[f64]) -> ForwardCache {
        assert_eq!(input.len(), self.sizes[0]);
        let mut pre = Vec::with_capacity(self.n_layers());
        let mut post = Vec::with_capacity(self.n_layers() + 1);
        post.push(input.to_vec());

        for l in 0..self.n_layers() {
            let n_in = self.sizes[l];
            let n_out = self.sizes[l + 1];
            let x = post.last().unwrap();
            let mut z = vec![0.0; n_out];
            for o in 0..n_out {
                let row = &self.weights[l][o * n_in..(o + 1) * n_in];
                let mut acc = self.biases[l][o];
                for (w, xi) in row.iter().zip(x) {
                    acc += w * xi;
                }
                z[o] = acc;
            }
            let out = if l + 1 == self.n_layers() {
                z.clone() // linear output layer
            } else {
                z.iter().map(|&v| self.activate(v)).collect()
            };
            pre.push(z);
            post.push(out);
        }
        ForwardCache { pre, post }
    }

    /// Backpropagate `dL/d(output)` for one example, adding the parameter
    /// gradient into `grad` (flat layout, see `params_flat`).
    pub fn accumulate_grad(&self, cache: &ForwardCache, dout: &[f64], grad: &mut [f64]) {
        assert_eq!(dout.len(), self.n_outputs());
        assert_eq!(grad.len(), self.param_count());

        let mut delta = dout.to_vec(); // dL/dz of the current layer (output is linear)
        for l in (0..self.n_layers()).rev() {
            let n_in = self.sizes[l];
            let n_out = self.sizes[l + 1];
            let input = &cache.post[l];
            let base = self.layer_offset(l);

            for o in 0..n_out {
                let gw = &mut grad[base + o * n_in..base + (o + 1) * n_in];
                for (g, xi) in gw.iter_mut().zip(input) {
                    *g += delta[o] * xi;
                }
            }
            let gb = &mut grad[base + n_out * n_in..base + n_out * n_in + n_out];
            for (g, d) in gb.iter_mut().zip(&delta) {
                *g += d;
            }

            if l > 0 {
                let mut prev = vec![0.0; n_in];
                for o in 0..n_out {
                    let row = &self.weights[l][o * n_in..(o + 1) * n_in];
                    for (p, w) in prev.iter_mut().zip(row) {
                        *p += delta[o] * w;
                    }
                }
                for (p, &z) in prev.iter_mut().zip(&cache.pre[l - 1]) {
                    *p *= self.activate_deriv(z);
                }
                delta = prev;
            }
        }
    }

    pub fn param_count(&self) -> usize {
        (0..self.n_layers()).map(|l| self.sizes[l] * self.sizes[l + 1] + self.sizes[l + 1]).sum()
    }

    fn layer_offset(&self, layer: usize) -> usize {
        (0..layer).map(|l| self.sizes[l] * self.sizes[l + 1] + self.sizes[l + 1]).sum()
    }

    pub fn params_flat(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.param_count());
        for l in 0..self.n_layers() {
            out.extend_from_slice(&self.weights[l]);
            out.extend_from_slice(&self.biases[l]);
        }
        out
    }

    /// `param[i] += delta[i]` over the flat layout.
    pub fn add_to_params(&mut self, delta: &[f64]) {
        assert_eq!(delta.len(), self.param_count());
        let mut idx = 0;
        for l in 0..self.n_layers() {
            for w in self.weights[l].iter_mut() {
                *w += delta[idx];
                idx += 1;
            }
            for b in self.biases[l].iter_mut() {
                *b += delta[idx];
                idx += 1;
            }
        }
    }

    pub fn nudge_param(&mut self, index: usize, amount: f64) {
        let mut idx = index;
        for l in 0..self.n_layers() {
            if idx < self.weights[l].len() {
                self.weights[l][idx] += amount;
                return;
            }
            idx -= self.weights[l].len();
            if idx < self.biases[l].len() {
                self.biases[l][idx] += amount;
                return;
            }
            idx -= self.biases[l].len();
        }
        panic!("parameter index {index} out of range");
    }
}

/// Compare analytic gradients against central finite differences
/// (step 1e-5) of an arbitrary scalar loss of the network; returns the
/// maximum relative error over all parameters.
pub fn gradient_check<F: Fn(&Mlp) -> f64>(net: &Mlp, loss: F, analytic: &[f64]) -> f64 {
    assert_eq!(analytic.len(), net.param_count());
    let h = 1e-5;
    let mut worst = 0.0f64;
    for i in 0..net.param_count() {
        let mut plus = net.clone();
        plus.nudge_param(i, h);
        let mut minus = net.clone();
        minus.nudge_param(i, -h);
        let numeric = (loss(&plus) - loss(&minus)) / (2.0 * h);
        let denom = (numeric.abs() + analytic[i].abs()).max(1e-8);
        worst = worst.max((numeric - analytic[i]).abs() / denom);
    }
    worst
}

/// Mean squared error over a batch of (input, target) pairs, with the
/// matching analytic gradient. Shared by tests and the gradient checks.
pub fn mse_loss_and_grad(net: &Mlp, batch: &[(Vec<f64>, Vec<f64>)]) -> (f64, Vec<f64>) {
    let mut grad = vec![0.0; net.param_count()];
    let mut loss = 0.0;
    let scale = 1.0 / batch.len() as f64;
    for (input, target) in batch {
        let cache = net.forward_cached(input);
        let out = cache.output();
        let mut dout = vec![0.0; out.len()];
        for (o, (y, t)) in out.iter().zip(target).enumerate() {
            loss += scale * (y - t) * (y - t);
            dout[o] = scale * 2.0 * (y - t);
        }
        net.accumulate_grad(&cache, &dout, &mut grad);
    }
    (loss, grad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn forward_matches_hand_computation() {
        let mut net = Mlp::new(&[2, 2, 1], ActivationKind::Tanh, &mut ChaCha8Rng::seed_from_u64(0));
        // overwrite with known parameters
        net.weights[0] = vec![1.0, 0.0, 0.0, 1.0];
        net.biases[0] = vec![0.0, 0.5];
        net.weights[1] = vec![2.0, -1.0];
        net.biases[1] = vec![0.25];
        let out = net.forward(&[0.3, -0.2]);
        let h = [(0.3f64).tanh(), (0.3f64).tanh()]; // z = [0.3, -0.2+0.5=0.3]
        let expect = 2.0 * h[0] - 1.0 * h[1] + 0.25;
        assert!((out[0] - expect).abs() < 1e-12);
    }

    #[test]
    fn one_hot_forward_is_finite_with_declared_shape() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let net = Mlp::new(&[25, 64, 64, 4], ActivationKind::Rectifier, &mut rng);
        let mut x = vec![0.0; 25];
        x[7] = 1.0;
        let out = net.forward(&x);
        assert_eq!(out.len(), 4);
        assert!(out.iter().all(|v| v.is_finite()));
        assert_eq!(net.param_count(), 25 * 64 + 64 + 64 * 64 + 64 + 64 * 4 + 4);
    }

    #[test]
    fn linear_single_layer_gradient_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let net = Mlp::new(&[3, 2], ActivationKind::Tanh, &mut rng); // no hidden -> pure linear
        let batch = vec![
            (vec![0.5, -1.0, 2.0], vec![1.0, 0.0]),
            (vec![-0.25, 0.75, 0.1], vec![0.0, 1.0]),
        ];
        let (_, grad) = mse_loss_and_grad(&net, &batch);
        let err = gradient_check(&net, |n| mse_loss_and_grad(n, &batch).0, &grad);
        assert!(err < 1e-6, "relative error {err}");
    }

    #[test]
    fn zero_weight_tanh_net_has_forced_output_gradient() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut net = Mlp::new(&[2, 2, 1], ActivationKind::Tanh, &mut rng);
        for w in net.weights.iter_mut() {
            w.iter_mut().for_each(|v| *v = 0.0);
        }
        // zero weights, zero targets: output = 0, hidden output = tanh(0) = 0,
        // so every weight gradient vanishes and only the output bias gradient
        // survives: d/db (b^2) = 2b = 0 as well -> all-zero gradient, exactly.
        let batch = vec![(vec![1.0, -1.0], vec![0.0])];
        let (loss, grad) = mse_loss_and_grad(&net, &batch);
        assert_eq!(loss, 0.0);
        assert!(grad.iter().all(|&g| g == 0.0));
    }

    #[test]
    fn two_hidden_rectifier_gradient_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let net = Mlp::new(&[4, 8, 8, 3], ActivationKind::Rectifier, &mut rng);
        let batch: Vec<(Vec<f64>, Vec<f64>)> = (0..6)
            .map(|_| {
                let x: Vec<f64> = (0..4).map(|_| rng.random_range(-1.0..1.0)).collect();
                let t: Vec<f64> = (0..3).map(|_| rng.random_range(-1.0..1.0)).collect();
                (x, t)
            })
            .collect();
        let (_, grad) = mse_loss_and_grad(&net, &batch);
        let err = gradient_check(&net, |n| mse_loss_and_grad(n, &batch).0, &grad);
        assert!(err < 1e-4, "relative error {err}");
    }

    #[test]
    fn tanh_two_hidden_gradient_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let net = Mlp::new(&[4, 8, 8, 3], ActivationKind::Tanh, &mut rng);
        let batch: Vec<(Vec<f64>, Vec<f64>)> = (0..6)
            .map(|_| {
                let x: Vec<f64> = (0..4).map(|_| rng.random_range(-1.0..1.0)).collect();
                let t: Vec<f64> = (0..3).map(|_| rng.random_range(-1.0..1.0)).collect();
                (x, t)
            })
            .collect();
        let (_, grad) = mse_loss_and_grad(&net, &batch);
        let err = gradient_check(&net, |n| mse_loss_and_grad(n, &batch).0, &grad);
        assert!(err < 1e-4, "relative error {err}");
    }
}
