//! Core vocabulary: the fixed resources every knowledge base understands.
//!
//! Identifiers live in six namespaces. `capec:`, `cwe:`, and `cve:` hold
//! catalog-derived classes, `node:` holds monitored network nodes, `ev:`
//! holds sensor events and their attribute properties, and `core:` holds the
//! modeling vocabulary below. Bare names in rule and query text resolve to
//! the `core:` namespace.

use crate::term::Resource;

pub const PREFIX_CORE: &str = "core";
pub const PREFIX_CAPEC: &str = "capec";
pub const PREFIX_CWE: &str = "cwe";
pub const PREFIX_CVE: &str = "cve";
pub const PREFIX_NODE: &str = "node";
pub const PREFIX_EVENT: &str = "ev";

// Structural predicates.
pub const TYPE: &str = "core:type";
pub const SUB_CLASS_OF: &str = "core:subClassOf";
pub const SUB_PROPERTY_OF: &str = "core:subPropertyOf";
pub const EQUIVALENT_TO: &str = "core:equivalentTo";
pub const INVERSE_OF: &str = "core:inverseOf";

// Declaration markers used as objects of core:type.
pub const CLASS: &str = "core:Class";
pub const OBJECT_PROPERTY: &str = "core:ObjectProperty";
pub const DATA_PROPERTY: &str = "core:DataProperty";
pub const TRANSITIVE_PROPERTY: &str = "core:TransitiveProperty";
pub const SYMMETRIC_PROPERTY: &str = "core:SymmetricProperty";
pub const FUNCTIONAL_PROPERTY: &str = "core:FunctionalProperty";

// Domain classes.
pub const SYSTEM_OBJECT: &str = "core:SystemObject";
pub const NETWORK_NODE: &str = "core:NetworkNode";
pub const SYSTEM: &str = "core:System";
pub const IP_ADDRESS: &str = "core:IPAddress";
pub const PORT: &str = "core:Port";
pub const VULNERABLE: &str = "core:Vulnerable";
pub const UNDER_POTENTIAL_ATTACK: &str = "core:UnderPotentialAttackSystem";
pub const UNDER_ATTACK: &str = "core:UnderAttackSystem";
pub const ATTACK_PATTERN: &str = "core:AttackPattern";
pub const WEAKNESS: &str = "core:Weakness";
pub const VULNERABILITY: &str = "core:Vulnerability";
pub const EVENT: &str = "core:Event";
pub const ATTACK_STEP: &str = "core:AttackStep";
pub const WEAKNESS_OBSERVED: &str = "core:WeaknessObserved";
pub const VULNERABILITY_OBSERVED: &str = "core:VulnerabilityObserved";
pub const CONSEQUENCE: &str = "core:Consequence";

// The four consequence categories attacks may be tagged with.
pub const UNAUTHORIZED_DISCLOSURE: &str = "core:UnauthorizedDisclosure";
pub const DECEPTION: &str = "core:Deception";
pub const DISRUPTION: &str = "core:Disruption";
pub const USURPATION: &str = "core:Usurpation";

// Domain object properties.
pub const HAS_SECURITY_ISSUE: &str = "core:hasSecurityIssue";
pub const HAS_WEAKNESS: &str = "core:hasWeakness";
pub const HAS_VULNERABILITY: &str = "core:hasVulnerability";
pub const RELATED_TO: &str = "core:relatedTo";
pub const RELATED_BY: &str = "core:relatedBy";
pub const TARGETS: &str = "core:targets";
pub const PART_OF: &str = "core:partOf";
pub const HAS_CONSEQUENCE: &str = "core:hasConsequence";

// Domain data properties.
pub const OCCURRED_AT: &str = "core:occurredAt";
pub const NAME: &str = "core:name";
pub const DESCRIPTION: &str = "core:description";
pub const PREREQUISITE: &str = "core:prerequisite";

/// The five predicates that drive knowledge-base bookkeeping and are always
/// accepted without a prior declaration.
pub const STRUCTURAL_PREDICATES: [&str; 5] =
    [TYPE, SUB_CLASS_OF, SUB_PROPERTY_OF, EQUIVALENT_TO, INVERSE_OF];

/// The declaration markers accepted as objects of `core:type`.
pub const DECLARATION_MARKERS: [&str; 6] = [
    CLASS,
    OBJECT_PROPERTY,
    DATA_PROPERTY,
    TRANSITIVE_PROPERTY,
    SYMMETRIC_PROPERTY,
    FUNCTIONAL_PROPERTY,
];

/// Builds a [`Resource`] from a vocabulary constant. Panics on invalid input,
/// which for the constants in this module cannot happen.
pub fn res(name: &str) -> Resource {
    Resource::new(name).expect("vocabulary constant is a valid resource")
}

/// Resolves a bare identifier from rule or query text to the core namespace;
/// prefixed identifiers pass through unchanged.
pub fn resolve(name: &str) -> crate::error::Result<Resource> {
    qualify(PREFIX_CORE, name)
}

/// Places a raw identifier under `prefix` unless it already carries a
/// namespace of its own.
pub fn qualify(prefix: &str, raw: &str) -> crate::error::Result<Resource> {
    if raw.contains(':') {
        Resource::new(raw)
    } else {
        Resource::new(format!("{prefix}:{raw}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn constants_are_valid_and_unique() {
        let all = [
            TYPE,
            SUB_CLASS_OF,
            SUB_PROPERTY_OF,
            EQUIVALENT_TO,
            INVERSE_OF,
            CLASS,
            OBJECT_PROPERTY,
            DATA_PROPERTY,
            TRANSITIVE_PROPERTY,
            SYMMETRIC_PROPERTY,
            FUNCTIONAL_PROPERTY,
            SYSTEM_OBJECT,
            NETWORK_NODE,
            SYSTEM,
            IP_ADDRESS,
            PORT,
            VULNERABLE,
            UNDER_POTENTIAL_ATTACK,
            UNDER_ATTACK,
            ATTACK_PATTERN,
            WEAKNESS,
            VULNERABILITY,
            EVENT,
            ATTACK_STEP,
            WEAKNESS_OBSERVED,
            VULNERABILITY_OBSERVED,
            CONSEQUENCE,
            UNAUTHORIZED_DISCLOSURE,
            DECEPTION,
            DISRUPTION,
            USURPATION,
            HAS_SECURITY_ISSUE,
            HAS_WEAKNESS,
            HAS_VULNERABILITY,
            RELATED_TO,
            RELATED_BY,
            TARGETS,
            PART_OF,
            HAS_CONSEQUENCE,
            OCCURRED_AT,
            NAME,
            DESCRIPTION,
            PREREQUISITE,
        ];
        let unique: BTreeSet<_> = all.iter().collect();
        assert_eq!(unique.len(), all.len());
        for name in all {
            let r = res(name);
            assert_eq!(r.prefix(), PREFIX_CORE);
        }
    }

    #[test]
    fn resolve_defaults_to_core_namespace() {
        assert_eq!(resolve("System").unwrap().as_str(), "core:System");
        assert_eq!(resolve("cwe:CWE-345").unwrap().as_str(), "cwe:CWE-345");
        assert!(resolve("a:b:c").is_err());
    }
}
