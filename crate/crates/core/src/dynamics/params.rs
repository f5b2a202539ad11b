use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{gauss_legendre_unit, Node};

/// Default number of Gauss–Legendre nodes for the sigma average.
pub const DEFAULT_SIGMA_NODES: usize = 16;

/// Sign of the nonlinearity in `i u_t + \Delta u = ± N(u)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    /// `+N(u)` on the right-hand side.
    Defocusing,
    /// `-N(u)` on the right-hand side.
    Focusing,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Defocusing => 1.0,
            Sign::Focusing => -1.0,
        }
    }
}

/// Equation parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub dimension: usize,
    pub power: f64,
    pub sign: Sign,
    pub sigma_nodes: Vec<Node>,
    /// Multiplies the nonlinearity; 0 turns the equation linear. Only
    /// meant for testing.
    pub nonlinearity_weight: f64,
}

impl ModelParams {
    /// Parameters with the default 16-node sigma rule and unit weight.
    pub fn new(dimension: usize, power: f64, sign: Sign) -> Result<Self> {
        Self::with_node_count(dimension, power, sign, DEFAULT_SIGMA_NODES)
    }

    pub fn with_node_count(dimension: usize, power: f64, sign: Sign, nodes: usize) -> Result<Self> {
        let params = ModelParams {
            dimension,
            power,
            sign,
            sigma_nodes: gauss_legendre_unit(nodes)?,
            nonlinearity_weight: 1.0,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn linear(mut self) -> Self {
        self.nonlinearity_weight = 0.0;
        self
    }

    /// Coefficient `c` in `i u_t + \Delta u = c N(u)`.
    pub fn coefficient(&self) -> f64 {
        self.sign.value() * self.nonlinearity_weight
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=2).contains(&self.dimension) {
            return Err(Error::InvalidParameter(format!(
                "simulations support dimension 1 or 2, got {}",
                self.dimension
            )));
        }
        if !(self.power > 0.0 && self.power.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "power must be positive and finite, got {}",
                self.power
            )));
        }
        if !self.nonlinearity_weight.is_finite() {
            return Err(Error::InvalidParameter("nonlinearity weight must be finite".into()));
        }
        if self.sigma_nodes.is_empty() {
            return Err(Error::InvalidParameter("sigma rule has no nodes".into()));
        }
        if let Some(q) = self
            .sigma_nodes
            .iter()
            .find(|q| !(0.0..=1.0).contains(&q.sigma) || !q.weight.is_finite())
        {
            return Err(Error::InvalidParameter(format!(
                "sigma node {} outside [0, 1] or bad weight {}",
                q.sigma, q.weight
            )));
        }
        let total: f64 = self.sigma_nodes.iter().map(|q| q.weight).sum();
        if (total - 1.0).abs() > 1e-14 {
            return Err(Error::InvalidParameter(format!(
                "sigma weights must sum to 1, got {total}"
            )));
        }
        Ok(())
    }
}
