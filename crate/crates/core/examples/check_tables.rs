use isometry_atlas::classify::*;

fn main() {
    for name in all_known_types() {
        let t = deformation_data(name);
        let cand = nontrivial_candidate_orders(&t);
        let kept = order_filter(&t, DiscAction::Nontrivial);
        if !cand.is_empty() {
            println!("{}: candidates {:?} kept {:?}", name.display(), cand, kept);
        }
    }
    let kum = deformation_data(TypeName::Kum(2));
    println!("Kum trivial orders: {:?}", order_filter(&kum, DiscAction::Trivial));
    let k3n = deformation_data(TypeName::K3n(2));
    println!("K3n trivial orders: {:?}", order_filter(&k3n, DiscAction::Trivial));
}
