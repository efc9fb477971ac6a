mod common;

use approxhad::plot::{kappa_curve_svg, plot_registry};
use approxhad::search::{bundled_registry_dir, Registry};

#[test]
fn bundled_registry_plot_matches_golden() {
    let registry = Registry::open(bundled_registry_dir()).unwrap();
    let svg = plot_registry(&registry).unwrap();
    assert_eq!(svg.matches("<circle").count(), registry.best_per_n().len());
    common::golden::check("registry_plot.svg", &svg);
}

#[test]
fn plot_is_independent_of_point_order() {
    let points = [(3usize, 2.0), (5, 1.5), (7, 1.6), (6, 1.58)];
    let mut reversed = points;
    reversed.reverse();
    assert_eq!(kappa_curve_svg(&points).unwrap(), kappa_curve_svg(&reversed).unwrap());
}
