#include "ordwalk/mcsim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "ordwalk/density.hpp"
#include "ordwalk/errors.hpp"
#include "ordwalk/harmonic.hpp"
#include "ordwalk/rng.hpp"
#include "ordwalk/stats.hpp"

namespace ordwalk {

namespace {

constexpr long long kBlock = 8192;

int worker_count(int streams, long long blocks) {
    unsigned hw = std::thread::hardware_concurrency();
    int n = streams > 0 ? streams : static_cast<int>(hw ? hw : 4);
    return static_cast<int>(std::min<long long>(n, std::max<long long>(blocks, 1)));
}

// Deterministic parallel mean/stderr: each path owns RNG stream == its
// index, blocks are accumulated in path order and merged in block order,
// so the result does not depend on the number of workers.
template <class Fn>
RunningStat parallel_stat(long long samples, const SimConfig& cfg, Fn&& per_path) {
    long long nblocks = (samples + kBlock - 1) / kBlock;
    std::vector<RunningStat> partial(static_cast<size_t>(nblocks));
    std::atomic<long long> next{0};
    auto work = [&]() {
        for (;;) {
            long long b = next.fetch_add(1);
            if (b >= nblocks) return;
            RunningStat stat;
            long long lo = b * kBlock, hi = std::min(samples, lo + kBlock);
            for (long long path = lo; path < hi; ++path) {
                StreamRng rng(cfg.seed, static_cast<std::uint64_t>(path));
                stat.add(per_path(path, rng));
            }
            partial[static_cast<size_t>(b)] = stat;
        }
    };
    int workers = worker_count(cfg.streams, nblocks);
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    RunningStat total;
    for (const auto& p : partial) total.merge(p);
    return total;
}

bool strictly_ordered(const double* z, int d) {
    for (int j = 1; j < d; ++j)
        if (!(z[j - 1] < z[j])) return false;
    return true;
}

bool interlaced(const double* a, const double* b, int d) {
    for (int j = 0; j < d; ++j) {
        if (!(a[j] <= b[j])) return false;
        if (j + 1 < d && !(b[j] <= a[j + 1])) return false;
    }
    return true;
}

}  // namespace

PathEnsemble sample_paths(const ChamberPoint& x, const SimConfig& cfg) {
    const int d = x.dim();
    if (cfg.rates.dim() != d) throw DimensionError("sample_paths: dimension mismatch");
    if (cfg.horizon < 1) throw InvalidInputError("sample_paths: horizon must be >= 1");
    if (cfg.samples < 1) throw InvalidInputError("sample_paths: samples must be >= 1");

    PathEnsemble ens;
    ens.samples = cfg.samples;
    ens.d = d;
    ens.horizon = cfg.horizon;
    ens.traj.resize(static_cast<size_t>(cfg.samples) * (cfg.horizon + 1) * d);
    ens.tau.assign(static_cast<size_t>(cfg.samples), -1);
    ens.rho.assign(static_cast<size_t>(cfg.samples), -1);
    ens.weight.assign(static_cast<size_t>(cfg.samples), 1.0);

    parallel_stat(cfg.samples, cfg, [&](long long path, StreamRng& rng) {
        double* row = &ens.traj[static_cast<size_t>(path) * (cfg.horizon + 1) * d];
        for (int j = 0; j < d; ++j) row[j] = x[j];
        for (long long step = 1; step <= cfg.horizon; ++step) {
            const double* prev = row + (step - 1) * d;
            double* cur = row + step * d;
            for (int j = 0; j < d; ++j) cur[j] = prev[j] + rng.exponential(cfg.rates.values[j]);
            if (ens.tau[path] < 0 && !strictly_ordered(cur, d)) ens.tau[path] = step;
            if (ens.rho[path] < 0 && !interlaced(prev, cur, d)) ens.rho[path] = step;
        }
        return 0.0;
    });
    return ens;
}

McEstimate survival_estimate(const ChamberPoint& x, long long n, const Rates& rates, Kill kill,
                             const SimConfig& cfg) {
    const int d = x.dim();
    if (rates.dim() != d) throw DimensionError("survival_estimate: dimension mismatch");
    if (d == 1) return {1.0, 0.0, cfg.samples};

    RunningStat stat = parallel_stat(cfg.samples, cfg, [&](long long, StreamRng& rng) {
        std::array<double, 16> prev{}, cur{};
        for (int j = 0; j < d; ++j) prev[j] = x[j];
        for (long long step = 1; step <= n; ++step) {
            for (int j = 0; j < d; ++j) cur[j] = prev[j] + rng.exponential(rates.values[j]);
            bool alive = (kill == Kill::Tau) ? strictly_ordered(cur.data(), d)
                                             : interlaced(prev.data(), cur.data(), d);
            if (!alive) return 0.0;
            prev = cur;
        }
        return 1.0;
    });
    double p = stat.mean;
    double se = std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(cfg.samples));
    return {p, se, cfg.samples};
}

McEstimate htransform_estimate(const ChamberPoint& x, long long n, const Rates& rates,
                               const std::function<double(const PathView&)>& statistic,
                               const SimConfig& cfg) {
    const int d = x.dim();
    if (rates.dim() != d) throw DimensionError("htransform_estimate: dimension mismatch");
    if (rates.regime != Regime::Equal && rates.regime != Regime::StrictlyDecreasing)
        throw RegimeError("htransform_estimate: equal or strictly decreasing rates required");
    if (n < 1) throw InvalidInputError("htransform_estimate: need n >= 1");

    const bool equal = rates.regime == Regime::Equal;
    const double lam = rates.values[0];
    auto log_h = [&](const std::vector<double>& z) {
        if (equal) {
            std::vector<double> s(z);
            for (double& v : s) v *= lam;
            return detail::h_equal_raw(s);
        }
        return detail::h_distinct_raw(z, rates.values);
    };
    LogSigned hx = log_h(x.coords);
    if (hx.sign <= 0)
        throw NumericalConsistencyError("htransform_estimate: h(x) must be positive");

    RunningStat stat = parallel_stat(cfg.samples, cfg, [&](long long, StreamRng& rng) {
        thread_local std::vector<double> buf;
        buf.resize(static_cast<size_t>(n + 1) * d);
        for (int j = 0; j < d; ++j) buf[j] = x[j];
        bool alive = true;
        for (long long step = 1; step <= n; ++step) {
            double* cur = &buf[static_cast<size_t>(step) * d];
            const double* prev = cur - d;
            for (int j = 0; j < d; ++j) cur[j] = prev[j] + rng.exponential(rates.values[j]);
            if (alive && !strictly_ordered(cur, d)) alive = false;
        }
        if (!alive) return 0.0;
        std::vector<double> end(buf.end() - d, buf.end());
        LogSigned hz = log_h(end);
        if (hz.sign <= 0) return 0.0;
        double w = std::exp(hz.logmag - hx.logmag);
        PathView view{buf.data(), d, n};
        return w * statistic(view);
    });
    return {stat.mean, stat.stderr_mean(), stat.n};
}

LppTable lpp_dp(const std::vector<double>& field, int k, long long n) {
    if (k < 1 || n < 1) throw InvalidInputError("lpp_dp: need k, n >= 1");
    if (field.size() != static_cast<size_t>(k) * n)
        throw DimensionError("lpp_dp: field size does not match k x n");
    LppTable t;
    t.k = k;
    t.n = n;
    t.values.assign(field.size(), 0.0);
    for (int i = 0; i < k; ++i) {
        for (long long j = 0; j < n; ++j) {
            double up = (i > 0) ? t.values[static_cast<size_t>(i - 1) * n + j] : 0.0;
            double left = (j > 0) ? t.values[static_cast<size_t>(i) * n + j - 1] : 0.0;
            t.values[static_cast<size_t>(i) * n + j] =
                std::max(up, left) + field[static_cast<size_t>(i) * n + j];
        }
    }
    return t;
}

LppTable queue_departures(const std::vector<double>& field, int k, long long n) {
    if (k < 1 || n < 1) throw InvalidInputError("queue_departures: need k, n >= 1");
    if (field.size() != static_cast<size_t>(k) * n)
        throw DimensionError("queue_departures: field size does not match k x n");
    // Customers c = 1..n flow through queues j = 1..k; departure of customer
    // c from queue j waits for its own arrival (queue j-1) and the previous
    // customer: D(j,c) = max(D(j,c-1), D(j-1,c)) + e_{cj}.
    LppTable t;
    t.k = n;  // transposed indexing: rows are customers
    t.n = k;
    t.values.assign(field.size(), 0.0);
    auto dep = [&](long long c, int j) -> double& {
        return t.values[static_cast<size_t>(c - 1) * k + (j - 1)];
    };
    for (long long c = 1; c <= n; ++c) {
        for (int j = 1; j <= k; ++j) {
            double prev_customer = (c > 1) ? dep(c - 1, j) : 0.0;
            double own_arrival = (j > 1) ? dep(c, j - 1) : 0.0;
            dep(c, j) = std::max(prev_customer, own_arrival) +
                        field[static_cast<size_t>(j - 1) * n + (c - 1)];
        }
    }
    return t;
}

namespace {

// Maximal weight of k vertex-disjoint up-right paths on the d x m grid,
// path a running (comp 1, time a) -> (comp d, time m-k+a). States are the
// strictly increasing tuples of exit components of the alive paths, bottom
// (newest) first; per time slice each path covers [enter, exit] in its
// column and disjointness is exit_i < enter_{i+1}.
double disjoint_paths_max(const std::vector<double>& e, int d, long long m, int k) {
    if (k == 0) return 0.0;
    if (k == 1) {
        std::vector<double> col(d);
        // plain LPP on the comp x time grid
        std::vector<double> row(static_cast<size_t>(m), 0.0);
        std::vector<double> dp(static_cast<size_t>(d) * m, 0.0);
        for (int c = 0; c < d; ++c)
            for (long long t = 0; t < m; ++t) {
                double up = c > 0 ? dp[static_cast<size_t>(c - 1) * m + t] : 0.0;
                double left = t > 0 ? dp[static_cast<size_t>(c) * m + t - 1] : 0.0;
                dp[static_cast<size_t>(c) * m + t] = std::max(up, left) + e[static_cast<size_t>(c) * m + t];
            }
        return dp[static_cast<size_t>(d - 1) * m + (m - 1)];
    }

    const double neg = -std::numeric_limits<double>::infinity();
    // Enumerate strictly increasing tuples per alive count.
    auto tuples_of = [&](int na) {
        std::vector<std::vector<int>> out;
        std::vector<int> cur(na);
        auto rec = [&](auto&& self, int pos, int lo) -> void {
            if (pos == na) { out.push_back(cur); return; }
            for (int c = lo; c < d; ++c) { cur[pos] = c; self(self, pos + 1, c + 1); }
        };
        rec(rec, 0, 0);
        return out;
    };

    std::vector<double> colsum(static_cast<size_t>(d) + 1, 0.0);
    std::vector<std::vector<int>> prev_states;
    std::vector<double> prev_val;

    for (long long t = 1; t <= m; ++t) {
        // alive at t: a in [alo, ahi]; bottom of the tuple is path ahi.
        long long alo = std::max<long long>(1, t - (m - k));
        long long ahi = std::min<long long>(k, t);
        int na = static_cast<int>(ahi - alo + 1);
        bool entering = (t <= k);
        bool dying = (t >= m - k + 1);  // path a = t-(m-k) must reach comp d at slice t

        // prefix sums of column t
        for (int c = 0; c < d; ++c)
            colsum[c + 1] = colsum[c] + e[static_cast<size_t>(c) * m + (t - 1)];

        auto states = tuples_of(na);
        std::vector<double> val(states.size(), neg);

        for (size_t si = 0; si < states.size(); ++si) {
            const auto& exits = states[si];
            if (dying && exits[na - 1] != d - 1) continue;  // top path must exit at comp d

            // enters: bottom path enters at 0 if newly created, otherwise all
            // inherit the previous slice's exits (minus the one that died).
            if (t == 1) {
                // single path, enter at comp 0
                if (exits[0] >= 0) {
                    double w = colsum[exits[0] + 1] - colsum[0];
                    val[si] = std::max(val[si], w);
                }
                continue;
            }

            long long palo = std::max<long long>(1, (t - 1) - (m - k));
            long long pahi = std::min<long long>(k, t - 1);
            int pna = static_cast<int>(pahi - palo + 1);
            bool predied = (t - 1 >= m - k + 1);

            for (size_t pi = 0; pi < prev_states.size(); ++pi) {
                if (prev_val[pi] == neg) continue;
                const auto& pexits = prev_states[pi];
                // Continuing paths of slice t listed bottom-to-top: if a new
                // path enters, it occupies position 0 with enter comp 0 and
                // the previous exits shift up by one; if the previous top
                // died, it is dropped.
                int shift = entering ? 1 : 0;
                int pcount = pna - (predied ? 1 : 0);  // survivors from t-1
                if (pcount + shift != na) continue;     // bookkeeping guard
                double w = 0.0;
                bool ok = true;
                int prev_top_enter = d;  // sentinel above everything
                for (int i = na - 1; i >= 0 && ok; --i) {
                    int enter;
                    if (entering && i == 0) enter = 0;
                    else enter = pexits[static_cast<size_t>(i - shift)];
                    if (exits[i] < enter) { ok = false; break; }
                    if (exits[i] >= prev_top_enter) { ok = false; break; }
                    prev_top_enter = enter;
                    w += colsum[exits[i] + 1] - colsum[enter];
                }
                if (ok) val[si] = std::max(val[si], prev_val[pi] + w);
            }
        }
        prev_states = std::move(states);
        prev_val = std::move(val);
    }

    double best = neg;
    for (double v : prev_val) best = std::max(best, v);
    return best;
}

}  // namespace

std::vector<std::vector<double>> sample_z_from_zero(int d, long long n, const SimConfig& cfg) {
    if (d < 1 || n < 1) throw InvalidInputError("sample_z_from_zero: need d, n >= 1");
    if (cfg.rates.dim() != d || cfg.rates.regime != Regime::Equal)
        throw RegimeError("sample_z_from_zero: equal rates required");
    const double lam = cfg.rates.values[0];
    const long long tmax = n + d - 1;

    std::vector<std::vector<double>> out(static_cast<size_t>(cfg.samples),
                                         std::vector<double>(static_cast<size_t>(d)));
    parallel_stat(cfg.samples, cfg, [&](long long path, StreamRng& rng) {
        std::vector<double> field(static_cast<size_t>(d) * tmax);
        for (int c = 0; c < d; ++c)
            for (long long t = 0; t < tmax; ++t)
                field[static_cast<size_t>(c) * tmax + t] = rng.exponential(lam);
        auto& z = out[static_cast<size_t>(path)];
        for (int j = 1; j <= d; ++j) {
            long long mj = n + d - j;
            // G_k on the m_j-column prefix of the field
            std::vector<double> prefix(static_cast<size_t>(d) * mj);
            for (int c = 0; c < d; ++c)
                for (long long t = 0; t < mj; ++t)
                    prefix[static_cast<size_t>(c) * mj + t] = field[static_cast<size_t>(c) * tmax + t];
            int k_hi = d - j + 1;
            double g_hi = disjoint_paths_max(prefix, d, mj, k_hi);
            double g_lo = disjoint_paths_max(prefix, d, mj, k_hi - 1);
            z[static_cast<size_t>(j - 1)] = g_hi - g_lo;
        }
        return 0.0;
    });
    return out;
}

namespace {

// One push-block sweep: particle (k,j) is pushed by its lower-left neighbour
// and blocked by its upper neighbour, levels updated top to bottom, left to
// right, level k consuming rate-lambda_k jumps.
void pushblock_step(std::vector<std::vector<double>>& z, const std::vector<double>& rates,
                    StreamRng& rng) {
    const int d = static_cast<int>(z.size());
    for (int k = 0; k < d; ++k) {
        for (int j = 0; j <= k; ++j) {
            double jump = rng.exponential(rates[static_cast<size_t>(k)]);
            double base = z[k][j];
            if (k > 0 && j > 0) base = std::max(base, z[k - 1][j - 1]);  // pushing
            double cand = base + jump;
            if (k > 0 && j < k) cand = std::min(cand, z[k - 1][j]);      // blocking
            z[k][j] = cand;
        }
    }
    for (int k = 1; k < d; ++k)
        for (int j = 0; j <= k; ++j) {
            if (j > 0 && !(z[k - 1][j - 1] <= z[k][j]))
                throw NumericalConsistencyError("pushblock: interlacing violated (lower)");
            if (j < k && !(z[k][j] <= z[k - 1][j]))
                throw NumericalConsistencyError("pushblock: interlacing violated (upper)");
        }
}

void check_pushblock_rates(const Rates& rates, int d) {
    if (rates.dim() != d) throw DimensionError("pushblock: rates dimension mismatch");
    for (int k = 1; k < d; ++k)
        if (!(rates.values[k - 1] >= rates.values[k]))
            throw RegimeError("pushblock: rates must be weakly decreasing");
}

}  // namespace

std::vector<GTPattern> pushblock_evolve(int d, long long n, const Rates& rates,
                                        std::uint64_t seed, std::uint64_t stream) {
    if (d < 1 || n < 0) throw InvalidInputError("pushblock_evolve: need d >= 1, n >= 0");
    check_pushblock_rates(rates, d);
    StreamRng rng(seed, stream);
    std::vector<std::vector<double>> z(static_cast<size_t>(d));
    for (int k = 0; k < d; ++k) z[static_cast<size_t>(k)].assign(static_cast<size_t>(k) + 1, 0.0);

    std::vector<GTPattern> traj;
    traj.reserve(static_cast<size_t>(n) + 1);
    traj.emplace_back(z);
    for (long long step = 1; step <= n; ++step) {
        pushblock_step(z, rates.values, rng);
        traj.emplace_back(z);
    }
    return traj;
}

std::vector<double> pushblock_top_samples(int d, long long n, const Rates& rates,
                                          const SimConfig& cfg) {
    check_pushblock_rates(rates, d);
    std::vector<double> out(static_cast<size_t>(cfg.samples));
    parallel_stat(cfg.samples, cfg, [&](long long path, StreamRng& rng) {
        std::vector<std::vector<double>> z(static_cast<size_t>(d));
        for (int k = 0; k < d; ++k) z[static_cast<size_t>(k)].assign(static_cast<size_t>(k) + 1, 0.0);
        for (long long step = 1; step <= n; ++step) pushblock_step(z, rates.values, rng);
        out[static_cast<size_t>(path)] = z[static_cast<size_t>(d - 1)][static_cast<size_t>(d - 1)];
        return 0.0;
    });
    return out;
}

CouplingResult coupling_check(int d, long long n, const SimConfig& cfg) {
    if (d < 1 || n < 1) throw InvalidInputError("coupling_check: need d, n >= 1");
    if (cfg.rates.dim() != d) throw DimensionError("coupling_check: rates dimension mismatch");

    CouplingResult res;
    res.trials = cfg.samples;
    std::atomic<long long> id_fail{0}, ev_fail{0};
    parallel_stat(cfg.samples, cfg, [&](long long, StreamRng& rng) {
        // shared field X_{ij}, i = 1..n steps, j = 1..d components
        std::vector<double> field(static_cast<size_t>(n) * d);
        for (long long i = 0; i < n; ++i)
            for (int j = 0; j < d; ++j)
                field[static_cast<size_t>(i) * d + j] = rng.exponential(cfg.rates.values[j]);

        // S_j(i), i = 0..n
        std::vector<double> s(static_cast<size_t>(n + 1) * d, 0.0);
        for (long long i = 1; i <= n; ++i)
            for (int j = 0; j < d; ++j)
                s[static_cast<size_t>(i) * d + j] =
                    s[static_cast<size_t>(i - 1) * d + j] + field[static_cast<size_t>(i - 1) * d + j];

        // T_j(m), m = 0..n+d-1; T_j is flat for m <= d-1-j (0-based j)
        const long long mmax = n + d - 1;
        std::vector<double> tt(static_cast<size_t>(mmax + 1) * d, 0.0);
        for (int j = 0; j < d; ++j) {
            long long offset = d - 1 - j;  // T_j(i + offset) accumulates X_{ij}
            for (long long m = 1; m <= mmax; ++m) {
                double prev = tt[static_cast<size_t>(m - 1) * d + j];
                double inc = 0.0;
                long long i = m - offset;
                if (i >= 1 && i <= n) inc = field[static_cast<size_t>(i - 1) * d + j];
                tt[static_cast<size_t>(m) * d + j] = prev + inc;
            }
        }

        bool id_ok = true;
        for (long long i = 0; i <= n && id_ok; ++i)
            for (int j = 0; j < d; ++j)
                if (s[static_cast<size_t>(i) * d + j] !=
                    tt[static_cast<size_t>(i + d - 1 - j) * d + j]) {
                    id_ok = false;
                    break;
                }
        if (!id_ok) id_fail.fetch_add(1);

        // Per-constraint equivalence: S_{j-1}(i) <= S_j(i) versus the matched
        // interlacing inequality T_{j-1}(m) <= T_j(m-1), m = i + d - j + 1
        // (1-based j); both scans read the same field.
        bool ev_ok = true;
        for (long long i = 1; i <= n && ev_ok; ++i) {
            for (int j = 2; j <= d; ++j) {
                bool order_ok = s[static_cast<size_t>(i) * d + (j - 2)] <=
                                s[static_cast<size_t>(i) * d + (j - 1)];
                long long m = i + d - j + 1;
                bool inter_ok = tt[static_cast<size_t>(m) * d + (j - 2)] <=
                                tt[static_cast<size_t>(m - 1) * d + (j - 1)];
                if (order_ok != inter_ok) {
                    ev_ok = false;
                    break;
                }
            }
        }
        if (!ev_ok) ev_fail.fetch_add(1);
        return 0.0;
    });
    res.identity_failures = id_fail.load();
    res.event_mismatches = ev_fail.load();
    return res;
}

}  // namespace ordwalk
