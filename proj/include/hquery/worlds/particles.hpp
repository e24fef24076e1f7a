#ifndef HQUERY_WORLDS_PARTICLES_HPP
#define HQUERY_WORLDS_PARTICLES_HPP

#include "../interpreter.hpp"
#include "grid_formatter.hpp"

#include <array>
#include <memory>
#include <random>

namespace hquery::worlds {

// Deterministic stand-in for a physics particle box: identical seed and
// count reproduce the exact same entities.
struct Particle {
    std::int64_t id = 0;
    bool sphere = false;
    double mass = 0;
    std::array<double, 3> velocity{};
    std::array<double, 3> position{};
};

struct ParticleWorld {
    std::int64_t seed = 0;
    std::vector<Particle> entities;

    static ParticleWorld make(std::int64_t seed, std::int64_t n) {
        ParticleWorld world;
        world.seed = seed;
        std::mt19937 rng(static_cast<std::uint32_t>(seed));
        std::uniform_real_distribution<double> mass_dist(0.1, 10.0);
        std::uniform_real_distribution<double> vel_dist(-5.0, 5.0);
        std::uniform_real_distribution<double> pos_dist(-10.0, 10.0);
        std::bernoulli_distribution shape_dist(0.5);
        for (std::int64_t i = 0; i < n; ++i) {
            Particle p;
            p.id = i;
            p.sphere = shape_dist(rng);
            p.mass = mass_dist(rng);
            for (double& v : p.velocity) v = vel_dist(rng);
            for (double& v : p.position) v = pos_dist(rng);
            world.entities.push_back(p);
        }
        return world;
    }
};

inline constexpr const char* kParticleWorldId = "particles";

// Registers the enumerator plus id/obj/mass/velocity/linearVelocity/
// isSphere/hasBody, binds `space` to the world root, and returns the root
// entity.
inline Value attach_particles(Interpreter& interp, std::int64_t seed, std::int64_t n) {
    auto world = std::make_shared<ParticleWorld>(ParticleWorld::make(seed, n));

    interp.registry().add_world(kParticleWorldId, [world] {
        std::vector<Value> out;
        out.reserve(world->entities.size());
        for (const Particle& p : world->entities)
            out.push_back(Value(Entity{kParticleWorldId, p.id}));
        return out;
    });

    auto particle_of = [world](const Value& v) -> const Particle& {
        if (!v.is_entity() || v.as_entity().world != kParticleWorldId)
            throw ScriptError(ErrorKind::HostError, "expected a particle entity");
        std::int64_t h = v.as_entity().handle;
        if (h < 0 || h >= static_cast<std::int64_t>(world->entities.size()))
            throw ScriptError(ErrorKind::HostError, "stale particle handle");
        return world->entities[static_cast<std::size_t>(h)];
    };
    auto unary = [particle_of](const std::vector<Value>& args) -> const Particle& {
        if (args.size() != 1)
            throw ScriptError(ErrorKind::HostError, "expected a single entity argument");
        return particle_of(args[0]);
    };

    interp.add_function("id", [unary](const std::vector<Value>& args) {
        return Value(unary(args).id);
    });
    interp.add_function("obj", [unary](const std::vector<Value>& args) {
        unary(args); // validates
        return args[0];
    });
    interp.add_function("mass", [unary](const std::vector<Value>& args) {
        return Value(unary(args).mass);
    });
    interp.add_function("velocity", [unary](const std::vector<Value>& args) {
        const Particle& p = unary(args);
        return Value(List{Value(p.velocity[0]), Value(p.velocity[1]), Value(p.velocity[2])});
    });
    interp.add_function("linearVelocity", [particle_of](const std::vector<Value>& args) {
        if (args.size() != 2 || !args[1].is_number())
            throw ScriptError(ErrorKind::HostError, "linearVelocity expects (entity, axis)");
        std::int64_t axis = static_cast<std::int64_t>(args[1].number());
        if (axis < 0 || axis > 2)
            throw ScriptError(ErrorKind::HostError, "linearVelocity: axis must be 0, 1, or 2");
        return Value(particle_of(args[0]).velocity[static_cast<std::size_t>(axis)]);
    });
    interp.add_function("positionOf", [unary](const std::vector<Value>& args) {
        const Particle& p = unary(args);
        return Value(List{Value(p.position[0]), Value(p.position[1]), Value(p.position[2])});
    });
    interp.add_function("isSphere", [unary](const std::vector<Value>& args) {
        return Value(unary(args).sphere);
    });
    interp.add_function("hasBody", [unary](const std::vector<Value>& args) {
        unary(args);
        return Value(true);
    });

    Value root(Entity{kParticleWorldId, kWorldRootHandle});
    interp.set_variable("space", root);
    register_grid_formatter(interp);
    return root;
}

} // namespace hquery::worlds

#endif
