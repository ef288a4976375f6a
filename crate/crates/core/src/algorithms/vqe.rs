use super::hamiltonian::{deuteron_hamiltonian, Hamiltonian};
use super::{AlgoError, Result};
use crate::sim::{Circuit, Instruction, StateVector};

/// One-parameter deuteron ansatz: `X(q0); Ry(q1, theta); CX(q1, q0)`.
pub fn ansatz(theta: f64) -> Circuit {
    let mut c = Circuit::new("ansatz", 2);
    c.extend([
        Instruction::X(0),
        Instruction::Ry(1, theta),
        Instruction::CX {
            control: 1,
            target: 0,
        },
    ])
    .expect("fixed two-qubit ansatz is valid");
    c
}

/// A differentiable scalar function of `n_params` reals.
pub trait Objective {
    fn n_params(&self) -> usize;
    fn value(&self, params: &[f64]) -> Result<f64>;
    fn value_and_gradient(&self, params: &[f64]) -> Result<(f64, Vec<f64>)>;
}

/// Energy of the ansatz state, with a central-difference gradient.
pub struct VqeObjective {
    hamiltonian: Hamiltonian,
    ansatz: fn(&[f64]) -> Circuit,
    n_params: usize,
    step: f64,
}

impl VqeObjective {
    pub fn new(
        hamiltonian: Hamiltonian,
        ansatz: fn(&[f64]) -> Circuit,
        n_params: usize,
        step: f64,
    ) -> Result<Self> {
        if step.is_nan() || step <= 0.0 {
            return Err(AlgoError::InvalidParams(format!(
                "gradient step {step} must be positive"
            )));
        }
        Ok(VqeObjective {
            hamiltonian,
            ansatz,
            n_params,
            step,
        })
    }

    /// Deuteron Hamiltonian with [`ansatz`].
    pub fn deuteron(step: f64) -> Result<Self> {
        Self::new(deuteron_hamiltonian(), |p| ansatz(p[0]), 1, step)
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn state(&self, params: &[f64]) -> Result<StateVector> {
        self.check(params)?;
        let circuit = (self.ansatz)(params);
        let mut s = StateVector::new(circuit.n_qubits());
        for inst in circuit.instructions() {
            s.apply(inst)?;
        }
        Ok(s)
    }

    fn check(&self, params: &[f64]) -> Result<()> {
        if params.len() != self.n_params {
            return Err(AlgoError::InvalidParams(format!(
                "expected {} parameters, got {}",
                self.n_params,
                params.len()
            )));
        }
        Ok(())
    }
}

impl Objective for VqeObjective {
    fn n_params(&self) -> usize {
        self.n_params
    }

    fn value(&self, params: &[f64]) -> Result<f64> {
        let s = self.state(params)?;
        Ok(self.hamiltonian.expectation(&s)?)
    }

    fn value_and_gradient(&self, params: &[f64]) -> Result<(f64, Vec<f64>)> {
        let f = self.value(params)?;
        let mut grad = Vec::with_capacity(params.len());
        let mut x = params.to_vec();
        for i in 0..params.len() {
            x[i] = params[i] + self.step;
            let up = self.value(&x)?;
            x[i] = params[i] - self.step;
            let down = self.value(&x)?;
            x[i] = params[i];
            grad.push((up - down) / (2.0 * self.step));
        }
        Ok((f, grad))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptResult {
    pub opt_val: f64,
    pub opt_params: Vec<f64>,
    /// Accepted steps.
    pub iterations: usize,
    pub converged: bool,
    /// Objective value at the start and after every accepted step.
    pub history: Vec<f64>,
}

pub trait Optimizer {
    fn optimize(&self, objective: &dyn Objective, initial: &[f64]) -> Result<OptResult>;
}

/// Steepest descent with Armijo backtracking. The first trial step is 1;
/// later ones start from the Barzilai-Borwein estimate
/// `|dx . dg| / |dg|^2` and halve until sufficient decrease holds.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientDescent {
    pub tolerance: f64,
    pub max_iterations: usize,
    pub armijo: f64,
}

impl Default for GradientDescent {
    fn default() -> Self {
        GradientDescent {
            tolerance: 1e-5,
            max_iterations: 200,
            armijo: 1e-4,
        }
    }
}

const MIN_STEP: f64 = 1e-14;
const MAX_STEP: f64 = 1e6;

impl Optimizer for GradientDescent {
    fn optimize(&self, objective: &dyn Objective, initial: &[f64]) -> Result<OptResult> {
        if self.max_iterations == 0 {
            return Err(AlgoError::InvalidParams(
                "max_iterations must be at least 1".into(),
            ));
        }
        if initial.len() != objective.n_params() {
            return Err(AlgoError::InvalidParams(format!(
                "expected {} initial parameters, got {}",
                objective.n_params(),
                initial.len()
            )));
        }
        let mut x = initial.to_vec();
        let (mut f, mut g) = objective.value_and_gradient(&x)?;
        let mut history = vec![f];
        let mut trial_step = 1.0;
        let mut iterations = 0;
        let mut converged = false;

        while iterations < self.max_iterations {
            let g2: f64 = g.iter().map(|v| v * v).sum();
            if g2.sqrt() < self.tolerance {
                converged = true;
                break;
            }
            let mut alpha = trial_step;
            let accepted = loop {
                let trial: Vec<f64> = x.iter().zip(&g).map(|(xi, gi)| xi - alpha * gi).collect();
                let ft = objective.value(&trial)?;
                if ft <= f - self.armijo * alpha * g2 {
                    break Some(trial);
                }
                alpha *= 0.5;
                if alpha < MIN_STEP {
                    break None;
                }
            };
            let Some(next) = accepted else {
                log::debug!("line search stalled at f = {f}");
                break;
            };
            let (f_next, g_next) = objective.value_and_gradient(&next)?;
            let (mut sy, mut yy) = (0.0, 0.0);
            for i in 0..x.len() {
                let (dx, dg) = (next[i] - x[i], g_next[i] - g[i]);
                sy += dx * dg;
                yy += dg * dg;
            }
            trial_step = if yy > 0.0 {
                (sy.abs() / yy).clamp(MIN_STEP, MAX_STEP)
            } else {
                1.0
            };
            (x, f, g) = (next, f_next, g_next);
            history.push(f);
            iterations += 1;
        }
        if !converged {
            converged = g.iter().map(|v| v * v).sum::<f64>().sqrt() < self.tolerance;
        }
        Ok(OptResult {
            opt_val: f,
            opt_params: x,
            iterations,
            converged,
            history,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VqeConfig {
    pub n_params: usize,
    /// Central-difference step.
    pub step: f64,
    /// Stop once the gradient norm drops below this.
    pub tolerance: f64,
    pub max_iterations: usize,
    pub initial_params: Vec<f64>,
}

impl Default for VqeConfig {
    fn default() -> Self {
        VqeConfig {
            n_params: 1,
            step: 1e-3,
            tolerance: 1e-5,
            max_iterations: 200,
            initial_params: vec![0.5],
        }
    }
}

/// Minimizes the deuteron energy over the one-parameter ansatz. A run that
/// hits `max_iterations` returns `converged == false` with the best value
/// reached (the descent is monotone).
pub fn vqe_minimize(config: &VqeConfig) -> Result<OptResult> {
    if config.n_params != 1 {
        return Err(AlgoError::InvalidParams(format!(
            "deuteron ansatz takes 1 parameter, config says {}",
            config.n_params
        )));
    }
    let objective = VqeObjective::deuteron(config.step)?;
    let optimizer = GradientDescent {
        tolerance: config.tolerance,
        max_iterations: config.max_iterations,
        ..GradientDescent::default()
    };
    optimizer.optimize(&objective, &config.initial_params)
}
