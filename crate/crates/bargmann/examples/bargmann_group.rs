//! The extended Galilei group: its action on extended points, the cocycle
//! that obstructs a true Galilei action on wavefunctions, and the lift that
//! turns the projective action into an honest one.

use bargmann::geometry::ExtendedPoint;
use bargmann::group::{act_wavefunction, lift_wavefunction, BargmannElement, Wavefunction};
use nalgebra::Vector3;

fn main() {
    let b = Vector3::new(1.0, 0.0, 0.0);
    let c = Vector3::new(2.0, 1.0, 0.0);

    // boosting then translating differs from the reverse order only in the
    // vertical shift, and by exactly b . c
    let bt = BargmannElement::pure_boost(b).compose(&BargmannElement::pure_translation(c));
    let tb = BargmannElement::pure_translation(c).compose(&BargmannElement::pure_boost(b));
    println!(
        "cocycle: boost-then-translate h = {}, translate-then-boost h = {}, b.c = {}",
        bt.vertical_shift,
        tb.vertical_shift,
        b.dot(&c)
    );

    // a pure boost acting on a point drags s by -b.r - t|b|^2/2
    let p = ExtendedPoint::new(1.0, Vector3::new(1.0, 1.0, 0.0), 0.0);
    let q = BargmannElement::pure_boost(b).act_point(&p);
    println!("boost action: r = {:?}, s = {}", (q.r.x, q.r.y, q.r.z), q.s);

    // the wavefunction action is projective; the lift makes it exact
    let (m, hbar) = (1.0, 1.0);
    let psi = Wavefunction::plane_wave(Vector3::new(0.4, -0.1, 0.7), 0.33, hbar);
    let g = BargmannElement::pure_boost(b).compose(&BargmannElement::pure_vertical_shift(0.7));
    let psi_star = act_wavefunction(&g, &psi, m, hbar);
    let lifted = lift_wavefunction(&psi, m, hbar);

    let r = Vector3::new(0.3, -0.2, 0.5);
    let t = 0.8;
    let pulled = lifted(&g.act_point(&ExtendedPoint::new(t, r, 0.0)));
    let direct = psi_star.eval(&r, t);
    let phase = pulled / direct;
    println!(
        "lift consistency: pulled/direct = {phase:.6}, expected exp(-imh) = {:.6}",
        (-num_complex::Complex64::i() * m * g.vertical_shift / hbar).exp()
    );
}
