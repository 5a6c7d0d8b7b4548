//! The forbidden family M_t: cores, homomorphisms into the target configurations,
//! membership, freeness, and an isomorphism-class catalogue of small members.

mod catalog;
mod core;
mod hom;
mod member;

pub use self::core::{find_core, reduce_to_k, tau_witness, CoreKind, CoreWitness, Reduction};
pub use catalog::{hom_free_equiv_fuzz, iso_classes, member_catalog, FuzzReport, IsoClasses, MemberCatalog};
pub use hom::{find_homomorphism, find_homomorphism_into, is_colorable, HomMap, HomTarget};
pub use member::{
    fano_plane, in_mt, is_mt_free, FreeReason, FreenessVerdict, MemberCertificate, MembershipVerdict, NonMember,
    ToyFamily, Verdict, Violation,
};
