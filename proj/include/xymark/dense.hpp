// dense.hpp — Brute-force evolution of emitter + chain in the full spin space
//
// Basis index: emitter is the most significant bit, chain site m is bit (N - m);
// a set bit means spin up (excited / occupied). The Hamiltonian conserves the number
// of set bits, so everything is stored as blocks per excitation sector.

#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "xymark/blp.hpp"
#include "xymark/channel.hpp"
#include "xymark/model.hpp"

namespace xymark {

inline constexpr int kDenseDefaultCap = 10;

// Throws CapabilityError when N exceeds the cap.
void check_dense_cap(const SystemSpec& spec, int cap);

// Full Hamiltonian H_E + H_SE + H_S, dimension 2^(N+1).
Mat build_full_hamiltonian(const SystemSpec& spec, int cap = kDenseDefaultCap);
// Chain Hamiltonian alone, dimension 2^N.
Mat build_environment_hamiltonian(const SystemSpec& spec, int cap = kDenseDefaultCap);

// States with a fixed number of set bits among nbits.
struct SectorIndex {
    int nbits{0};
    std::vector<std::vector<std::uint32_t>> states;
    std::vector<int> position;  // position of a basis state inside its sector

    explicit SectorIndex(int nbits);
    int sectors() const { return nbits + 1; }
};

using BlockKey = std::pair<int, int>;       // (row sector, column sector)
using BlockOperator = std::map<BlockKey, CMat>;

// Environment state as blocks per chain excitation number.
struct EnvDensity {
    std::vector<Mat> blocks;
    Mat dense() const;
};

EnvDensity thermal_env_density(const SystemSpec& spec, double beta, int cap = kDenseDefaultCap);
// Product of mode projectors with the occupations of env; thermal states use the Gibbs form.
EnvDensity env_density(const SystemSpec& spec, const EnvInitialState& env, int cap = kDenseDefaultCap);
// d_k^dagger d_k on the chain, dense 2^N, k 1-based.
Mat mode_number_operator(const SystemSpec& spec, int k, int cap = kDenseDefaultCap);

class DenseEngine {
public:
    explicit DenseEngine(const SystemSpec& spec, int cap = kDenseDefaultCap);

    // Reduced emitter states, rows/cols ordered (e, g).
    std::vector<Eigen::Matrix2cd> evolve(const EnvDensity& rho_E, const Eigen::Matrix2cd& rho_S,
                                         const TimeGrid& grid) const;

    const SystemSpec& spec() const { return spec_; }

private:
    // tr(rho(t) O) for all grid times.
    std::vector<cplx> expectation(const BlockOperator& rho0, const BlockOperator& obs, const TimeGrid& grid) const;
    BlockOperator to_eigenbasis(const BlockOperator& op) const;

    SystemSpec spec_;
    SectorIndex index_;
    std::vector<Vec> eps_;
    std::vector<Mat> Q_;
    BlockOperator excited_projector_;  // eigenbasis
    BlockOperator lowering_;           // |g><e| (x) 1, eigenbasis
};

Eigen::Matrix2cd bloch_density(const BlochState& s);

std::vector<Eigen::Matrix2cd> evolve_full(const SystemSpec& spec, const EnvInitialState& env,
                                          const BlochState& init, const TimeGrid& grid,
                                          int cap = kDenseDefaultCap);

// Process tomography with e, g, x+ inputs and a y+ consistency run.
// Throws std::runtime_error if the block structure is violated.
ChannelTrajectory tomography(const SystemSpec& spec, const EnvInitialState& env, const TimeGrid& grid,
                             int cap = kDenseDefaultCap);

// Spin-space correlation functions of the chain at site m0:
// plus = tr(rho sigma+ e^{-iHt} sigma- e^{iHt}), minus with sigma+ and sigma- exchanged.
struct DenseCorrelations {
    std::vector<cplx> plus;
    std::vector<cplx> minus;
};

DenseCorrelations dense_correlations(const SystemSpec& spec, const EnvInitialState& env, const TimeGrid& grid,
                                     int cap = kDenseDefaultCap);

}  // namespace xymark
