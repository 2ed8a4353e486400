use crate::params::{Order, RogonParams};

/// One published figure: caption parameters and the slice times it overlays.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FigureSpec {
    pub name: &'static str,
    pub order: Order,
    pub k: f64,
    pub times: &'static [f64],
}

impl FigureSpec {
    pub fn params(&self) -> RogonParams {
        RogonParams::figure(self.k)
    }

    pub fn title(&self) -> String {
        format!(
            "order-{} rogon, alpha=1.5, beta=1, a=2, b=5, k={}",
            self.order.as_int(),
            self.k
        )
    }
}

pub const FIGURES: [FigureSpec; 4] = [
    FigureSpec {
        name: "fig1",
        order: Order::One,
        k: 0.0,
        times: &[0.0, 0.4, 1.0],
    },
    FigureSpec {
        name: "fig2",
        order: Order::One,
        k: 0.5,
        times: &[0.0, 0.4, 1.0],
    },
    FigureSpec {
        name: "fig3",
        order: Order::Two,
        k: 0.0,
        times: &[0.0, 0.4, 1.2],
    },
    FigureSpec {
        name: "fig4",
        order: Order::Two,
        k: 0.5,
        times: &[0.0, 0.8, 1.5],
    },
];

/// Plotting window shared by all figures.
pub const FIGURE_S_RANGE: (f64, f64) = (-4.0, 4.0);
pub const FIGURE_T_RANGE: (f64, f64) = (-2.0, 2.0);
pub const FIGURE_NS: usize = 401;
pub const FIGURE_NT: usize = 201;
