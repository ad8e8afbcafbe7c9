#include "stixdesk/fixture.hpp"

#include <chrono>

namespace stixdesk {

namespace {

std::string random_word(std::mt19937_64& rng) {
    static constexpr const char* words[] = {"alpha", "bravo", "phish", "relay", "ember", "quartz",
                                            "delta", "nimbus", "vector", "harbor", "signal", "lumen"};
    std::uniform_int_distribution<std::size_t> pick(0, std::size(words) - 1);
    std::uniform_int_distribution<int> num(0, 999);
    return std::string(words[pick(rng)]) + "-" + std::to_string(num(rng));
}

const std::string& pick_entry(const Vocabulary& vocab, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> pick(0, vocab.entries.size() - 1);
    return vocab.entries[pick(rng)];
}

}  // namespace

PropertyValue sample_value(const PropertyDefinition& def, const Catalog& catalog, std::mt19937_64& rng) {
    using namespace std::chrono;
    switch (def.shape) {
        case ValueShape::String:
            return random_word(rng);
        case ValueShape::Vocabulary:
            return pick_entry(catalog.vocabulary(*def.vocabulary), rng);
        case ValueShape::Integer:
            return std::uniform_int_distribution<std::int64_t>(0, 100)(rng);
        case ValueShape::Boolean:
            return std::bernoulli_distribution(0.5)(rng);
        case ValueShape::Timestamp: {
            const auto ms = std::uniform_int_distribution<std::int64_t>(1'500'000'000'000, 1'800'000'000'000)(rng);
            return from_epoch_ms(ms);
        }
        case ValueShape::StringList: {
            std::vector<std::string> list;
            const int n = std::uniform_int_distribution<int>(1, 3)(rng);
            for (int i = 0; i < n; ++i)
                list.push_back(def.vocabulary ? pick_entry(catalog.vocabulary(*def.vocabulary), rng) : random_word(rng));
            return list;
        }
        case ValueShape::Structured:
            return StructuredValue{{"SHA-256", PropertyValue(random_word(rng))}};
    }
    return random_word(rng);
}

StixObject complete_object(StixObject object, const Catalog& catalog, std::mt19937_64& rng, Timestamp now) {
    const auto& def = catalog.lookup(object.kind);
    for (const auto* list : {&def.common_properties, &def.specific_properties}) {
        for (const auto& prop : *list) {
            if (prop.required && !object.properties.contains(prop.name))
                object = set_property(std::move(object), catalog, prop.name, sample_value(prop, catalog, rng), now).object;
        }
    }
    return object;
}

DeskFixture seed_desk_fixture(WorkspaceStore& store, const Catalog& catalog, Timestamp base, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    DeskFixture fx;
    auto now = base;
    const auto tick = [&] { return now += std::chrono::seconds{1}; };

    for (auto profile : {fx.main_profile, fx.other_profile}) {
        for (int i = 1; i <= 3; ++i) {
            const auto prefix = profile == fx.main_profile ? "analyst" : "manager";
            FixtureUser u{prefix + std::to_string(i), "pass-" + std::string(prefix) + "-" + std::to_string(i), profile};
            store.register_user(u.username, u.password, u.profile, Role::User, tick());
            fx.users.push_back(std::move(u));
        }
    }

    const auto kinds = catalog.list_kinds();
    std::uniform_int_distribution<std::size_t> pick_kind(0, kinds.size() - 1);

    for (int m = 0; m < 25; ++m) {
        const auto& user = fx.users[static_cast<std::size_t>(m % 3)];
        auto session = store.authenticate(user.username, user.password, tick());
        auto model = store.create_model(session, "model-" + std::to_string(m + 1), tick());
        fx.model_ids.push_back(model.model_id);

        if (m == 0) {
            fx.clean_model_id = model.model_id;
            for (int k = 0; k < 11; ++k) {
                auto obj = complete_object(new_object(catalog, kinds[pick_kind(rng)]->kind, now), catalog, rng, now);
                store.add_object(session, model.model_id, obj, tick());
                ++fx.object_count;
            }
            continue;
        }
        if (m == 1) {
            fx.incomplete_model_id = model.model_id;
            store.add_object(session, model.model_id, new_object(catalog, "indicator", now), tick());
            auto actor = set_property(new_object(catalog, "threat-actor", now), catalog, "name", "ember-crew", now).object;
            store.add_object(session, model.model_id, actor, tick());
            auto rel = new_object(catalog, "relationship", now);
            rel = set_property(std::move(rel), catalog, "relationship_type", "uses", now).object;
            rel = set_property(std::move(rel), catalog, "source_ref", actor.id.str(), now).object;
            store.add_object(session, model.model_id, rel, tick());
            fx.object_count += 3;
            continue;
        }

        for (int k = 0; k < 2; ++k) {
            auto obj = new_object(catalog, kinds[pick_kind(rng)]->kind, now);
            if (std::bernoulli_distribution(0.7)(rng)) obj = complete_object(std::move(obj), catalog, rng, now);
            auto rec = store.add_object(session, model.model_id, obj, tick());
            ++fx.object_count;
            const int roll = std::uniform_int_distribution<int>(0, 5)(rng);
            if (roll <= 2) {
                auto edited = complete_object(rec.payload, catalog, rng, now);
                store.update_object(session, rec.record_id, edited, tick());
            } else if (roll == 3) {
                store.retract_object(session, rec.record_id, tick());
            }
        }
    }
    fx.finished_at = tick();
    return fx;
}

}  // namespace stixdesk
