#include "herald/dense.hpp"

#include <algorithm>
#include <stdexcept>

#include "herald/errors.hpp"

namespace herald::dense {

DensityMatrix::DensityMatrix(std::vector<Subsystem> layout) : layout_(std::move(layout)) {
  strides_.assign(layout_.size(), 1);
  for (std::size_t k = layout_.size(); k-- > 0;) {
    if (layout_[k].dim < 1) throw std::invalid_argument("subsystem dimension must be positive");
    strides_[k] = dim_;
    dim_ *= static_cast<std::size_t>(layout_[k].dim);
  }
  data_.assign(dim_ * dim_, Complex{});
}

std::size_t DensityMatrix::site(std::string_view label) const {
  for (std::size_t k = 0; k < layout_.size(); ++k) {
    if (layout_[k].label == label) return k;
  }
  throw LabelError("unknown dense subsystem '" + std::string(label) + "'");
}

std::size_t DensityMatrix::index(std::span<const int> levels) const {
  std::size_t i = 0;
  for (std::size_t k = 0; k < layout_.size(); ++k) i += static_cast<std::size_t>(levels[k]) * strides_[k];
  return i;
}

std::vector<int> DensityMatrix::levels(std::size_t index) const {
  std::vector<int> out(layout_.size());
  for (std::size_t k = 0; k < layout_.size(); ++k) {
    out[k] = static_cast<int>((index / strides_[k]) % static_cast<std::size_t>(layout_[k].dim));
  }
  return out;
}

double DensityMatrix::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i).real();
  return t;
}

DensityMatrix diagonal_mixture(std::vector<Subsystem> layout,
                               const std::vector<std::pair<std::vector<int>, double>>& entries) {
  DensityMatrix rho(std::move(layout));
  for (const auto& [levels, weight] : entries) {
    const std::size_t i = rho.index(levels);
    rho(i, i) += weight;
  }
  return rho;
}

namespace {

/// Index bookkeeping shared by the kernels: for every global index its local
/// index and the global index with the local digits zeroed, plus the offset of
/// every local index and the non-zero pattern of K.
struct LocalPlan {
  std::vector<std::size_t> local;
  std::vector<std::size_t> base;
  std::vector<std::size_t> offset;
  std::vector<std::vector<std::pair<std::size_t, Complex>>> nonzero;  // per local row
};

LocalPlan make_plan(const DensityMatrix& rho, const LocalOperator& op) {
  std::vector<std::size_t> sites;
  std::size_t local_dim = 1;
  for (const auto& label : op.sites) {
    sites.push_back(rho.site(label));
    local_dim *= static_cast<std::size_t>(rho.layout()[sites.back()].dim);
  }
  if (local_dim != op.dim || op.matrix.size() != op.dim * op.dim) {
    throw std::invalid_argument("local operator dimension does not match its sites");
  }

  LocalPlan plan;
  plan.offset.assign(local_dim, 0);
  for (std::size_t l = 0; l < local_dim; ++l) {
    std::size_t rest = l;
    for (std::size_t k = sites.size(); k-- > 0;) {
      const auto d = static_cast<std::size_t>(rho.layout()[sites[k]].dim);
      plan.offset[l] += (rest % d) * rho.stride(sites[k]);
      rest /= d;
    }
  }
  plan.local.resize(rho.dim());
  plan.base.resize(rho.dim());
  for (std::size_t i = 0; i < rho.dim(); ++i) {
    std::size_t l = 0;
    std::size_t zeroed = i;
    for (std::size_t s : sites) {
      const auto d = static_cast<std::size_t>(rho.layout()[s].dim);
      const std::size_t digit = (i / rho.stride(s)) % d;
      l = l * d + digit;
      zeroed -= digit * rho.stride(s);
    }
    plan.local[i] = l;
    plan.base[i] = zeroed;
  }
  plan.nonzero.resize(local_dim);
  for (std::size_t r = 0; r < local_dim; ++r) {
    for (std::size_t c = 0; c < local_dim; ++c) {
      if (op(r, c) != Complex{}) plan.nonzero[r].emplace_back(c, op(r, c));
    }
  }
  return plan;
}

// T = K rho, one output row.
inline void left_row(const DensityMatrix& rho, const LocalPlan& plan, std::size_t i, Complex* out) {
  const std::size_t n = rho.dim();
  std::fill(out, out + n, Complex{});
  for (const auto& [k, v] : plan.nonzero[plan.local[i]]) {
    const Complex* src = &rho(plan.base[i] + plan.offset[k], 0);
    for (std::size_t j = 0; j < n; ++j) out[j] += v * src[j];
  }
}

inline void adjoint_into(const std::vector<Complex>& src, std::size_t n, std::size_t row, Complex* out) {
  for (std::size_t j = 0; j < n; ++j) out[j] = std::conj(src[j * n + row]);
}

}  // namespace

// K rho K^dag is evaluated as (K (K rho)^dag)^dag, so both passes are row
// operations on contiguous memory.
void apply_local_parallel(DensityMatrix& rho, const LocalOperator& op) {
  const LocalPlan plan = make_plan(rho, op);
  const std::size_t n = rho.dim();
  std::vector<Complex> t(n * n);
  const auto rows = static_cast<long long>(n);
  for (int pass = 0; pass < 2; ++pass) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < rows; ++i) left_row(rho, plan, static_cast<std::size_t>(i), &t[static_cast<std::size_t>(i) * n]);
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < rows; ++i) adjoint_into(t, n, static_cast<std::size_t>(i), &rho(static_cast<std::size_t>(i), 0));
  }
}

void apply_local_serial(DensityMatrix& rho, const LocalOperator& op) {
  const LocalPlan plan = make_plan(rho, op);
  const std::size_t n = rho.dim();
  std::vector<Complex> t(n * n);
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t i = 0; i < n; ++i) left_row(rho, plan, i, &t[i * n]);
    for (std::size_t i = 0; i < n; ++i) adjoint_into(t, n, i, &rho(i, 0));
  }
}

void apply_local(DensityMatrix& rho, const LocalOperator& op, Execution exec) {
  if (exec == Execution::parallel) {
    apply_local_parallel(rho, op);
  } else {
    apply_local_serial(rho, op);
  }
}

void apply_channel(DensityMatrix& rho, const std::vector<LocalOperator>& kraus, Execution exec) {
  if (kraus.empty()) throw std::invalid_argument("channel needs at least one Kraus operator");
  DensityMatrix sum = rho;
  apply_local(sum, kraus.front(), exec);
  for (std::size_t k = 1; k < kraus.size(); ++k) {
    DensityMatrix term = rho;
    apply_local(term, kraus[k], exec);
    sum = add(sum, term);
  }
  rho = std::move(sum);
}

void apply_local_bruteforce(DensityMatrix& rho, const LocalOperator& op) {
  const std::size_t n = rho.dim();
  std::vector<std::size_t> sites;
  for (const auto& label : op.sites) sites.push_back(rho.site(label));

  // K_full(i, j) = K(local(i), local(j)) when i and j agree off the sites.
  std::vector<Complex> full(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto li = rho.levels(i);
    for (std::size_t j = 0; j < n; ++j) {
      const auto lj = rho.levels(j);
      bool spectators_match = true;
      std::size_t r = 0;
      std::size_t c = 0;
      for (std::size_t k = 0; k < li.size(); ++k) {
        const bool local = std::find(sites.begin(), sites.end(), k) != sites.end();
        if (!local && li[k] != lj[k]) spectators_match = false;
      }
      if (!spectators_match) continue;
      for (std::size_t s : sites) {
        const auto d = static_cast<std::size_t>(rho.layout()[s].dim);
        r = r * d + static_cast<std::size_t>(li[s]);
        c = c * d + static_cast<std::size_t>(lj[s]);
      }
      full[i * n + j] = op(r, c);
    }
  }
  std::vector<Complex> t(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const Complex a = full[i * n + k];
      if (a == Complex{}) continue;
      for (std::size_t j = 0; j < n; ++j) t[i * n + j] += a * rho(k, j);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      Complex s{};
      for (std::size_t k = 0; k < n; ++k) s += t[i * n + k] * std::conj(full[j * n + k]);
      rho(i, j) = s;
    }
  }
}

DensityMatrix append_ground(const DensityMatrix& rho, Subsystem added) {
  auto layout = rho.layout();
  const auto d = static_cast<std::size_t>(added.dim);
  layout.push_back(std::move(added));
  DensityMatrix out(std::move(layout));
  for (std::size_t i = 0; i < rho.dim(); ++i) {
    for (std::size_t j = 0; j < rho.dim(); ++j) out(i * d, j * d) = rho(i, j);
  }
  return out;
}

namespace {

/// Maps an index of the reduced space (site removed) to the full index with
/// the removed site set to `level`.
std::size_t lift(const DensityMatrix& full, std::size_t site, std::size_t reduced_index, int level) {
  const std::size_t stride = full.stride(site);
  const auto d = static_cast<std::size_t>(full.layout()[site].dim);
  const std::size_t low = reduced_index % stride;
  const std::size_t high = reduced_index / stride;
  return (high * d + static_cast<std::size_t>(level)) * stride + low;
}

std::vector<Subsystem> without(const std::vector<Subsystem>& layout, std::size_t site) {
  auto out = layout;
  out.erase(out.begin() + static_cast<std::ptrdiff_t>(site));
  return out;
}

}  // namespace

DensityMatrix project(const DensityMatrix& rho, std::string_view label, int level) {
  const std::size_t s = rho.site(label);
  if (level < 0 || level >= rho.layout()[s].dim) throw std::invalid_argument("projection level out of range");
  DensityMatrix out(without(rho.layout(), s));
  for (std::size_t i = 0; i < out.dim(); ++i) {
    const std::size_t fi = lift(rho, s, i, level);
    for (std::size_t j = 0; j < out.dim(); ++j) out(i, j) = rho(fi, lift(rho, s, j, level));
  }
  return out;
}

DensityMatrix trace_out(const DensityMatrix& rho, std::string_view label) {
  const std::size_t s = rho.site(label);
  DensityMatrix out(without(rho.layout(), s));
  for (int level = 0; level < rho.layout()[s].dim; ++level) {
    for (std::size_t i = 0; i < out.dim(); ++i) {
      const std::size_t fi = lift(rho, s, i, level);
      for (std::size_t j = 0; j < out.dim(); ++j) out(i, j) += rho(fi, lift(rho, s, j, level));
    }
  }
  return out;
}

DensityMatrix keep_only(const DensityMatrix& rho, std::string_view label) {
  DensityMatrix out = rho;
  for (const auto& sub : rho.layout()) {
    if (sub.label != label) out = trace_out(out, sub.label);
  }
  return out;
}

DensityMatrix add(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("cannot add density matrices of different layouts");
  DensityMatrix out = a;
  auto dst = out.data();
  auto src = b.data();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
  return out;
}

std::map<std::vector<int>, double> joint_distribution(const DensityMatrix& rho, std::span<const std::string> sites) {
  std::vector<std::size_t> idx;
  for (const auto& s : sites) idx.push_back(rho.site(s));
  std::map<std::vector<int>, double> dist;
  for (std::size_t i = 0; i < rho.dim(); ++i) {
    const double p = rho(i, i).real();
    if (p == 0.0) continue;
    const auto lv = rho.levels(i);
    std::vector<int> key;
    key.reserve(idx.size());
    for (auto k : idx) key.push_back(lv[k]);
    dist[key] += p;
  }
  return dist;
}

}  // namespace herald::dense
