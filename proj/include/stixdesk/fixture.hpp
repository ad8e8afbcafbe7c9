#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "stixdesk/catalog.hpp"
#include "stixdesk/stix.hpp"
#include "stixdesk/store.hpp"

namespace stixdesk {

/// Shape-correct value for a property. Vocabulary-bound properties draw from their vocabulary.
PropertyValue sample_value(const PropertyDefinition& def, const Catalog& catalog, std::mt19937_64& rng);

/// Sets every required property the object lacks.
StixObject complete_object(StixObject object, const Catalog& catalog, std::mt19937_64& rng, Timestamp now);

struct FixtureUser {
    std::string username;
    std::string password;
    Profile profile;
};

/// The desk-scale workspace: two profiles of three users each, 25 models in the first
/// profile, about 60 objects. Some records are edited, some retracted, some never touched.
struct DeskFixture {
    std::vector<FixtureUser> users;
    Profile main_profile = Profile::Analysts;
    Profile other_profile = Profile::Management;
    std::vector<std::string> model_ids;
    /// 11 objects, all required properties present and in-vocabulary.
    std::string clean_model_id;
    /// Objects with known gaps; see seed_desk_fixture.
    std::string incomplete_model_id;
    int object_count = 0;
    Timestamp finished_at;
};

/// Populates an empty store. Timestamps advance one second per operation from `base`.
/// The incomplete model holds an indicator with no properties, a threat-actor with only
/// a name, and a relationship lacking target_ref.
DeskFixture seed_desk_fixture(WorkspaceStore& store, const Catalog& catalog, Timestamp base, std::uint64_t seed);

}  // namespace stixdesk
