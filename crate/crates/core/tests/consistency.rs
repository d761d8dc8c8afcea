use std::time::Instant;

use heisvoc_core::series::{
    component_sides, jacobi_sides_voa, ExponentWindow, Var, VoaOperands,
};
use heisvoc_core::{basis_up_to, tensor, FockVector, Rank, VocContext};
use heisvoc_core::heisenberg::tensor_form;
use heisvoc_core::bilinear_form;

fn ctx(d: u32) -> VocContext {
    VocContext::new(Rank::new(d).unwrap())
}

#[test]
fn virasoro_modes_are_omega_modes_and_co_modes() {
    for d in 1..=2 {
        let c = ctx(d);
        let omega = c.voa().omega().clone();
        for m in basis_up_to(c.rank(), 5) {
            let v = FockVector::monomial(m.clone());
            for k in -6..=6 {
                let l = c.voa().virasoro_apply(k, &v);
                assert_eq!(c.voa().y_coefficient(&omega, k + 1, &v).unwrap(), l, "L({k}) {m}");
                assert_eq!(c.co_virasoro_mode(k, &v), l, "co L({k}) {m}");
            }
        }
    }
}

#[test]
fn coproduct_is_adjoint_to_modes() {
    let c = ctx(2);
    let basis = basis_up_to(c.rank(), 3);
    for u in &basis {
        let uv = FockVector::monomial(u.clone());
        for k in -8..=8 {
            let delta = c.coproduct(&uv, k);
            for v in &basis {
                for w in &basis {
                    let vv = FockVector::monomial(v.clone());
                    let wv = FockVector::monomial(w.clone());
                    let lhs = tensor_form(&delta, &tensor(&vv, &wv));
                    let rhs = bilinear_form(&uv, &c.voa().y(&vv, k, &wv));
                    assert_eq!(lhs, rhs, "u={u} k={k} v={v} w={w}");
                }
            }
        }
    }
}

#[test]
fn windowed_and_residue_jacobi_agree() {
    let started = Instant::now();
    let c = ctx(1);
    let basis: Vec<FockVector> = basis_up_to(c.rank(), 3).into_iter().map(FockVector::monomial).collect();
    let window = ExponentWindow::cube(&[Var::X0, Var::X1, Var::X2], -3, 3).unwrap();
    for u in &basis {
        for v in &basis {
            for w in &basis {
                let sides = jacobi_sides_voa(c.voa(), u, v, w, &window).unwrap();
                let ops = VoaOperands { ctx: c.voa(), u, v, w };
                for cell in window.iter() {
                    let comp = component_sides(&ops, &cell);
                    let lhs = sides.lhs.coefficient(&cell).unwrap_or_default();
                    let rhs = sides.rhs.coefficient(&cell).unwrap_or_default();
                    assert_eq!(comp.lhs(), lhs, "{u} {v} {w} at {cell:?}");
                    assert_eq!(comp.third, rhs, "{u} {v} {w} at {cell:?}");
                }
            }
        }
    }
    eprintln!("dual Jacobi assemblies: {:?}", started.elapsed());
}
