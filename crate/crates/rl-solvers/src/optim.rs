use crate::nn::Mlp;
use dp_mechanisms::OptimizerKind;

const ADAM_BETA1: f64 = 0.9;
const ADAM_BETA2: f64 = 0.999;
const ADAM_EPS: f64 = 1e-8;

/// First-order optimizer over a network's flat parameter vector.
pub struct Optimizer {
    kind: OptimizerKind,
    lr: f64,
    m: Vec<f64>,
    v: Vec<f64>,
    t: u64,
    update: Vec<f64>,
}

impl Optimizer {
    pub fn new(kind: OptimizerKind, lr: f64, dim: usize) -> Self {
        Optimizer { kind, lr, m: vec![0.0; dim], v: vec![0.0; dim], t: 0, update: vec![0.0; dim] }
    }

    pub fn apply(&mut self, net: &mut Mlp, grad: &[f64]) {
        match self.kind {
            OptimizerKind::Sgd => {
                for (u, g) in self.update.iter_mut().zip(grad) {
                    *u = -self.lr * g;
                }
            }
            OptimizerKind::Adam => {
                self.t += 1;
                let bc1 = 1.0 - ADAM_BETA1.powi(self.t as i32);
                let bc2 = 1.0 - ADAM_BETA2.powi(self.t as i32);
                for i in 0..grad.len() {
                    self.m[i] = ADAM_BETA1 * self.m[i] + (1.0 - ADAM_BETA1) * grad[i];
                    self.v[i] = ADAM_BETA2 * self.v[i] + (1.0 - ADAM_BETA2) * grad[i] * grad[i];
                    let m_hat = self.m[i] / bc1;
                    let v_hat = self.v[i] / bc2;
                    self.update[i] = -self.lr * m_hat / (v_hat.sqrt() + ADAM_EPS);
                }
            }
        }
        net.add_to_params(&self.update);
    }
}
