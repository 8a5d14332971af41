// dense.cpp — Full spin-space evolution by excitation sector

#include "xymark/dense.hpp"

#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace xymark {

namespace {

using State = std::uint32_t;

State site_bit(int N, int m) { return State{1} << (N - m); }

struct Term {
    State to;
    double value;
};

// Off-diagonal and diagonal action of the spin Hamiltonian on one basis state.
// With an emitter the state has N + 1 bits and the emitter is bit N.
void hamiltonian_row(const SystemSpec& s, bool with_emitter, State x, std::vector<Term>& out) {
    out.clear();
    const int N = s.N;
    double diag = 0.0;
    for (int m = 1; m <= N; ++m) diag += s.h * ((x & site_bit(N, m)) ? 1.0 : -1.0);
    for (int m = 1; m < N; ++m) {
        const State b1 = site_bit(N, m), b2 = site_bit(N, m + 1);
        if (((x & b1) != 0) != ((x & b2) != 0)) out.push_back({x ^ b1 ^ b2, s.J});
    }
    if (with_emitter) {
        const State be = State{1} << N;
        if (x & be) diag += s.Delta;
        const State bm = site_bit(N, s.m0);
        if (((x & be) != 0) != ((x & bm) != 0)) out.push_back({x ^ be ^ bm, s.Omega});
    }
    out.push_back({x, diag});
}

Mat dense_hamiltonian(const SystemSpec& s, bool with_emitter) {
    const int bits = s.N + (with_emitter ? 1 : 0);
    const State dim = State{1} << bits;
    Mat H = Mat::Zero(dim, dim);
    std::vector<Term> row;
    for (State x = 0; x < dim; ++x) {
        hamiltonian_row(s, with_emitter, x, row);
        for (const auto& t : row) H(t.to, x) += t.value;
    }
    return H;
}

std::vector<Mat> sector_hamiltonians(const SystemSpec& s, bool with_emitter, const SectorIndex& idx) {
    std::vector<Mat> blocks;
    std::vector<Term> row;
    for (const auto& states : idx.states) {
        const auto n = static_cast<Eigen::Index>(states.size());
        Mat H = Mat::Zero(n, n);
        for (Eigen::Index j = 0; j < n; ++j) {
            hamiltonian_row(s, with_emitter, states[j], row);
            for (const auto& t : row) H(idx.position[t.to], j) += t.value;
        }
        blocks.push_back(std::move(H));
    }
    return blocks;
}

// c_i^dagger c_j with the Jordan-Wigner sign, on one chain sector block.
Mat hopping_block(int N, const SectorIndex& idx, int n, int i, int j) {
    const auto& states = idx.states[n];
    const auto dim = static_cast<Eigen::Index>(states.size());
    Mat C = Mat::Zero(dim, dim);
    const State bi = site_bit(N, i), bj = site_bit(N, j);
    State between = 0;
    for (int m = std::min(i, j) + 1; m < std::max(i, j); ++m) between |= site_bit(N, m);
    for (Eigen::Index col = 0; col < dim; ++col) {
        const State x = states[col];
        if (i == j) {
            if (x & bi) C(col, col) = 1.0;
            continue;
        }
        if (!(x & bj) || (x & bi)) continue;
        const double sign = (std::popcount(x & between) % 2) ? -1.0 : 1.0;
        C(idx.position[x ^ bi ^ bj], col) = sign;
    }
    return C;
}

struct SectorEigen {
    std::vector<Vec> eps;
    std::vector<Mat> Q;
};

SectorEigen diagonalize_blocks(const std::vector<Mat>& blocks) {
    SectorEigen out;
    for (const auto& H : blocks) {
        if (H.rows() == 0) {
            out.eps.emplace_back();
            out.Q.emplace_back();
            continue;
        }
        Eigen::SelfAdjointEigenSolver<Mat> es(H);
        out.eps.push_back(es.eigenvalues());
        out.Q.push_back(es.eigenvectors());
    }
    return out;
}

CVec phases(const Vec& eps, double t) {
    CVec u(eps.size());
    for (Eigen::Index i = 0; i < eps.size(); ++i) u(i) = std::exp(cplx(0.0, -eps(i) * t));
    return u;
}

}  // namespace

void check_dense_cap(const SystemSpec& spec, int cap) {
    spec.validate();
    if (spec.N > cap) {
        const double dim = std::ldexp(1.0, spec.N + 1);
        std::ostringstream os;
        os << "dense engine refuses N = " << spec.N << " (cap " << cap << "); full space dimension "
           << dim << ", a dense operator needs about " << dim * dim * 16.0 / (1 << 20) << " MiB";
        throw CapabilityError(os.str());
    }
}

SectorIndex::SectorIndex(int bits) : nbits(bits), states(bits + 1), position(std::size_t{1} << bits) {
    for (State x = 0; x < (State{1} << bits); ++x) {
        auto& s = states[std::popcount(x)];
        position[x] = static_cast<int>(s.size());
        s.push_back(x);
    }
}

Mat build_full_hamiltonian(const SystemSpec& spec, int cap) {
    check_dense_cap(spec, cap);
    return dense_hamiltonian(spec, true);
}

Mat build_environment_hamiltonian(const SystemSpec& spec, int cap) {
    check_dense_cap(spec, cap);
    return dense_hamiltonian(spec, false);
}

Mat EnvDensity::dense() const {
    const int N = static_cast<int>(blocks.size()) - 1;
    const SectorIndex idx(N);
    Mat rho = Mat::Zero(State{1} << N, State{1} << N);
    for (int n = 0; n <= N; ++n) {
        const auto& st = idx.states[n];
        for (std::size_t i = 0; i < st.size(); ++i)
            for (std::size_t j = 0; j < st.size(); ++j) rho(st[i], st[j]) = blocks[n](i, j);
    }
    return rho;
}

EnvDensity thermal_env_density(const SystemSpec& spec, double beta, int cap) {
    check_dense_cap(spec, cap);
    if (!(beta > 0.0)) throw std::invalid_argument("thermal state needs beta > 0");
    const SectorIndex idx(spec.N);
    const auto eig = diagonalize_blocks(sector_hamiltonians(spec, false, idx));
    double e_min = std::numeric_limits<double>::infinity();
    for (const auto& e : eig.eps) e_min = std::min(e_min, e.minCoeff());
    double Z = 0.0;
    std::vector<Vec> w;
    for (const auto& e : eig.eps) {
        w.push_back((-beta * (e.array() - e_min)).exp().matrix());
        Z += w.back().sum();
    }
    EnvDensity out;
    for (std::size_t n = 0; n < eig.eps.size(); ++n) {
        out.blocks.push_back(eig.Q[n] * (w[n] / Z).asDiagonal() * eig.Q[n].transpose());
    }
    return out;
}

EnvDensity env_density(const SystemSpec& spec, const EnvInitialState& env, int cap) {
    check_dense_cap(spec, cap);
    validate(env, spec);
    if (const auto* th = std::get_if<ThermalEnv>(&env)) return thermal_env_density(spec, th->beta, cap);
    const int N = spec.N;
    const SectorIndex idx(N);
    const auto basis = diagonalize_environment(spec);
    const auto occ = occupations(spec, basis, env);
    EnvDensity out;
    for (int n = 0; n <= N; ++n) {
        const auto dim = static_cast<Eigen::Index>(idx.states[n].size());
        std::vector<std::vector<Mat>> hop(N, std::vector<Mat>(N));
        for (int i = 1; i <= N; ++i)
            for (int j = 1; j <= N; ++j) hop[i - 1][j - 1] = hopping_block(N, idx, n, i, j);
        Mat rho = Mat::Identity(dim, dim);
        for (int k = 0; k < N; ++k) {
            Mat nk = Mat::Zero(dim, dim);
            for (int i = 0; i < N; ++i)
                for (int j = 0; j < N; ++j) nk += basis.W(k, i) * basis.W(k, j) * hop[i][j];
            const double f = occ.f(k);
            rho = rho * (f * nk + (1.0 - f) * (Mat::Identity(dim, dim) - nk));
        }
        out.blocks.push_back(std::move(rho));
    }
    return out;
}

Mat mode_number_operator(const SystemSpec& spec, int k, int cap) {
    check_dense_cap(spec, cap);
    if (k < 1 || k > spec.N) throw std::invalid_argument("mode index must satisfy 1 <= k <= N");
    const int N = spec.N;
    const SectorIndex idx(N);
    const auto basis = diagonalize_environment(spec);
    EnvDensity blocks;
    for (int n = 0; n <= N; ++n) {
        const auto dim = static_cast<Eigen::Index>(idx.states[n].size());
        Mat nk = Mat::Zero(dim, dim);
        for (int i = 1; i <= N; ++i)
            for (int j = 1; j <= N; ++j)
                nk += basis.W(k - 1, i - 1) * basis.W(k - 1, j - 1) * hopping_block(N, idx, n, i, j);
        blocks.blocks.push_back(std::move(nk));
    }
    return blocks.dense();
}

DenseEngine::DenseEngine(const SystemSpec& spec, int cap) : spec_(spec), index_((check_dense_cap(spec, cap), spec.N + 1)) {
    const auto eig = diagonalize_blocks(sector_hamiltonians(spec, true, index_));
    eps_ = eig.eps;
    Q_ = eig.Q;

    const int N = spec.N;
    const State be = State{1} << N;
    BlockOperator pe, low;
    for (int s = 0; s < index_.sectors(); ++s) {
        const auto& st = index_.states[s];
        CMat P = CMat::Zero(st.size(), st.size());
        for (std::size_t i = 0; i < st.size(); ++i)
            if (st[i] & be) P(i, i) = 1.0;
        pe[{s, s}] = P;
        if (s > 0) {
            const auto& lower = index_.states[s - 1];
            CMat L = CMat::Zero(lower.size(), st.size());
            for (std::size_t i = 0; i < st.size(); ++i)
                if (st[i] & be) L(index_.position[st[i] ^ be], i) = 1.0;
            low[{s - 1, s}] = L;
        }
    }
    excited_projector_ = to_eigenbasis(pe);
    lowering_ = to_eigenbasis(low);
}

BlockOperator DenseEngine::to_eigenbasis(const BlockOperator& op) const {
    BlockOperator out;
    for (const auto& [key, M] : op) {
        out[key] = Q_[key.first].transpose().cast<cplx>() * M * Q_[key.second].cast<cplx>();
    }
    return out;
}

std::vector<cplx> DenseEngine::expectation(const BlockOperator& rho0, const BlockOperator& obs,
                                           const TimeGrid& grid) const {
    // tr(U R U^dag O) = sum_{nm} R_nm e^{-i(e_n - e_m)t} O_mn in the eigenbasis.
    struct Piece {
        int s, sp;
        CMat C;
    };
    std::vector<Piece> pieces;
    for (const auto& [key, R] : rho0) {
        const auto it = obs.find({key.second, key.first});
        if (it == obs.end()) continue;
        pieces.push_back({key.first, key.second, R.cwiseProduct(it->second.transpose())});
    }
    std::vector<cplx> out(grid.size(), 0.0);
    for (std::size_t n = 0; n < grid.size(); ++n) {
        const double t = grid.t(n);
        std::vector<CVec> u(eps_.size());
        for (std::size_t s = 0; s < eps_.size(); ++s) u[s] = phases(eps_[s], t);
        cplx sum = 0.0;
        for (const auto& p : pieces) sum += (u[p.s].transpose() * p.C * u[p.sp].conjugate()).value();
        out[n] = sum;
    }
    return out;
}

std::vector<Eigen::Matrix2cd> DenseEngine::evolve(const EnvDensity& rho_E, const Eigen::Matrix2cd& rho_S,
                                                  const TimeGrid& grid) const {
    const int N = spec_.N;
    if (static_cast<int>(rho_E.blocks.size()) != N + 1) throw std::invalid_argument("environment size mismatch");
    const SectorIndex env_idx(N);
    const State mask = (State{1} << N) - 1;

    BlockOperator rho;
    for (int s = 0; s < index_.sectors(); ++s) {
        for (int sp = std::max(0, s - 1); sp <= std::min(index_.sectors() - 1, s + 1); ++sp) {
            const auto& rows = index_.states[s];
            const auto& cols = index_.states[sp];
            CMat R = CMat::Zero(rows.size(), cols.size());
            bool any = false;
            for (std::size_t i = 0; i < rows.size(); ++i) {
                const State a = rows[i] & mask;
                const int ei = (rows[i] >> N) ? 0 : 1;
                const int na = std::popcount(a);
                for (std::size_t j = 0; j < cols.size(); ++j) {
                    const State b = cols[j] & mask;
                    if (std::popcount(b) != na) continue;
                    const int ej = (cols[j] >> N) ? 0 : 1;
                    const cplx v = rho_S(ei, ej) * rho_E.blocks[na](env_idx.position[a], env_idx.position[b]);
                    if (v != 0.0) {
                        R(i, j) = v;
                        any = true;
                    }
                }
            }
            if (any) rho[{s, sp}] = R;
        }
    }
    const BlockOperator rho_eig = to_eigenbasis(rho);
    const auto pe = expectation(rho_eig, excited_projector_, grid);
    const auto eg = expectation(rho_eig, lowering_, grid);
    std::vector<Eigen::Matrix2cd> out(grid.size());
    for (std::size_t n = 0; n < grid.size(); ++n) {
        Eigen::Matrix2cd r;
        r(0, 0) = pe[n].real();
        r(0, 1) = eg[n];
        r(1, 0) = std::conj(eg[n]);
        r(1, 1) = rho_S.trace().real() - pe[n].real();
        out[n] = r;
    }
    return out;
}

Eigen::Matrix2cd bloch_density(const BlochState& s) {
    Eigen::Matrix2cd r;
    r(0, 0) = s.rho_ee();
    r(1, 1) = 1.0 - s.rho_ee();
    r(1, 0) = s.rho_ge();
    r(0, 1) = std::conj(s.rho_ge());
    return r;
}

std::vector<Eigen::Matrix2cd> evolve_full(const SystemSpec& spec, const EnvInitialState& env,
                                          const BlochState& init, const TimeGrid& grid, int cap) {
    const DenseEngine engine(spec, cap);
    return engine.evolve(env_density(spec, env, cap), bloch_density(init), grid);
}

ChannelTrajectory tomography(const SystemSpec& spec, const EnvInitialState& env, const TimeGrid& grid, int cap) {
    const DenseEngine engine(spec, cap);
    const EnvDensity rho_E = env_density(spec, env, cap);
    const auto re = engine.evolve(rho_E, bloch_density(BlochState::excited()), grid);
    const auto rg = engine.evolve(rho_E, bloch_density(BlochState::ground()), grid);
    const auto rx = engine.evolve(rho_E, bloch_density(BlochState::x_plus()), grid);
    const auto ry = engine.evolve(rho_E, bloch_density(BlochState::y_plus()), grid);

    ChannelTrajectory tr;
    tr.dt = grid.dt;
    tr.engine = "dense";
    tr.echo_horizon = echo_horizon(spec);
    tr.echo_warning = grid.t_fin() > tr.echo_horizon;
    for (std::size_t n = 0; n < grid.size(); ++n) {
        const double a = re[n](0, 0).real();
        const double c = rg[n](0, 0).real();
        const cplx b = 2.0 * rx[n](0, 1);
        const cplx by = 2.0 * kI * ry[n](0, 1);
        const double off = std::max({std::abs(re[n](0, 1)), std::abs(rg[n](0, 1)),
                                     std::abs(rx[n](0, 0).real() - 0.5 * (a + c)),
                                     std::abs(ry[n](0, 0).real() - 0.5 * (a + c)), std::abs(by - b)});
        if (off > 1e-9) {
            std::ostringstream os;
            os << "channel block structure violated at t = " << grid.t(n) << " (deviation " << off
               << "); the environment state must commute with the fermion number";
            throw std::runtime_error(os.str());
        }
        tr.samples.push_back({grid.t(n), a, c, b});
    }
    return tr;
}

DenseCorrelations dense_correlations(const SystemSpec& spec, const EnvInitialState& env, const TimeGrid& grid,
                                     int cap) {
    check_dense_cap(spec, cap);
    const int N = spec.N;
    const SectorIndex idx(N);
    const auto eig = diagonalize_blocks(sector_hamiltonians(spec, false, idx));
    const EnvDensity rho = env_density(spec, env, cap);
    const State bm = site_bit(N, spec.m0);

    // sigma+ from sector n-1 to n, in the eigenbases.
    std::vector<Mat> raise(N + 1);
    for (int n = 1; n <= N; ++n) {
        Mat S = Mat::Zero(idx.states[n].size(), idx.states[n - 1].size());
        for (std::size_t j = 0; j < idx.states[n - 1].size(); ++j) {
            const State x = idx.states[n - 1][j];
            if (!(x & bm)) S(idx.position[x | bm], j) = 1.0;
        }
        raise[n] = S;
    }
    struct Piece {
        int p_sector, q_sector;
        CMat C;  // A_pq B_qp
    };
    std::vector<Piece> plus, minus;
    for (int n = 1; n <= N; ++n) {
        const Mat& Qn = eig.Q[n];
        const Mat& Qm = eig.Q[n - 1];
        // plus: A = rho_n S+ (p in n, q in n-1), B = S- (q in n-1, p in n).
        const Mat Ap = Qn.transpose() * rho.blocks[n] * raise[n] * Qm;
        const Mat Bp = Qm.transpose() * raise[n].transpose() * Qn;
        plus.push_back({n, n - 1, Ap.cwiseProduct(Bp.transpose()).cast<cplx>()});
        // minus: A = rho_{n-1} S- (p in n-1, q in n), B = S+ (q in n, p in n-1).
        const Mat Am = Qm.transpose() * rho.blocks[n - 1] * raise[n].transpose() * Qn;
        const Mat Bm = Qn.transpose() * raise[n] * Qm;
        minus.push_back({n - 1, n, Am.cwiseProduct(Bm.transpose()).cast<cplx>()});
    }
    DenseCorrelations out;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = grid.t(i);
        auto eval = [&](const std::vector<Piece>& pieces) {
            cplx sum = 0.0;
            for (const auto& p : pieces) {
                // sum_pq C_pq e^{-i e_q t} e^{+i e_p t}
                sum += (phases(eig.eps[p.p_sector], t).conjugate().transpose() * p.C * phases(eig.eps[p.q_sector], t)).value();
            }
            return sum;
        };
        out.plus.push_back(eval(plus));
        out.minus.push_back(eval(minus));
    }
    return out;
}

}  // namespace xymark
