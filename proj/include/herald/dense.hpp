#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "herald/execution.hpp"

namespace herald::dense {

using Complex = std::complex<double>;

struct Subsystem {
  std::string label;
  int dim = 1;
};

/// Dense density matrix over a tensor product of subsystems. Basis index is
/// mixed radix with the first subsystem most significant; storage is
/// row-major D x D.
class DensityMatrix {
 public:
  DensityMatrix() = default;
  explicit DensityMatrix(std::vector<Subsystem> layout);

  const std::vector<Subsystem>& layout() const { return layout_; }
  std::size_t dim() const { return dim_; }
  std::size_t site(std::string_view label) const;
  std::size_t stride(std::size_t site) const { return strides_[site]; }

  Complex& operator()(std::size_t row, std::size_t col) { return data_[row * dim_ + col]; }
  const Complex& operator()(std::size_t row, std::size_t col) const { return data_[row * dim_ + col]; }
  std::span<Complex> data() { return data_; }
  std::span<const Complex> data() const { return data_; }

  /// Global index of a level assignment (one level per subsystem).
  std::size_t index(std::span<const int> levels) const;
  std::vector<int> levels(std::size_t index) const;

  double trace() const;

 private:
  std::vector<Subsystem> layout_;
  std::vector<std::size_t> strides_;
  std::size_t dim_ = 1;
  std::vector<Complex> data_;
};

/// Sum of weights * |levels><levels| (a diagonal mixture of basis states).
DensityMatrix diagonal_mixture(std::vector<Subsystem> layout,
                               const std::vector<std::pair<std::vector<int>, double>>& entries);

/// Operator acting on an ordered list of sites; `matrix` is row-major over the
/// local mixed-radix index (first listed site most significant).
struct LocalOperator {
  std::vector<std::string> sites;
  std::size_t dim = 0;
  std::vector<Complex> matrix;

  Complex operator()(std::size_t row, std::size_t col) const { return matrix[row * dim + col]; }
};

/// rho -> K rho K^dag, skipping zero entries of K. Rows are distributed with
/// OpenMP in the parallel variant; the serial variant is the same loop nest.
void apply_local_parallel(DensityMatrix& rho, const LocalOperator& op);
void apply_local_serial(DensityMatrix& rho, const LocalOperator& op);
void apply_local(DensityMatrix& rho, const LocalOperator& op, Execution exec = Execution::parallel);

/// rho -> sum_k K_k rho K_k^dag. All operators must act on the same sites.
void apply_channel(DensityMatrix& rho, const std::vector<LocalOperator>& kraus, Execution exec = Execution::parallel);

/// Reference for small systems: embeds K into the full space and forms the
/// dense product K_full rho K_full^dag directly.
void apply_local_bruteforce(DensityMatrix& rho, const LocalOperator& op);

/// rho (x) |0><0| on a new trailing subsystem.
DensityMatrix append_ground(const DensityMatrix& rho, Subsystem added);

/// <level| rho |level> on one site; the site is removed. Unnormalized.
DensityMatrix project(const DensityMatrix& rho, std::string_view label, int level);

DensityMatrix trace_out(const DensityMatrix& rho, std::string_view label);
DensityMatrix keep_only(const DensityMatrix& rho, std::string_view label);

/// Sum of two matrices with identical layouts.
DensityMatrix add(const DensityMatrix& a, const DensityMatrix& b);

/// Joint distribution of the listed sites from the diagonal of rho.
std::map<std::vector<int>, double> joint_distribution(const DensityMatrix& rho, std::span<const std::string> sites);

}  // namespace herald::dense
