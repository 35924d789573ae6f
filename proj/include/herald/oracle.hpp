#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "herald/dense.hpp"
#include "herald/schemes.hpp"

// Dense density-matrix re-implementation of the scheme circuits. Operators are
// built from generators by matrix exponentiation rather than from the
// substitution rules used by the sparse simulator.
namespace herald::oracle {

using dense::LocalOperator;

/// exp(A) for a row-major n x n matrix (scaling and squaring, Taylor core).
std::vector<Complex> expm(std::span<const Complex> a, std::size_t n);

/// exp(theta (e^{-i phi} a2^dag a1 - e^{i phi} a1^dag a2)) on (m1, m2).
LocalOperator beam_splitter_operator(const std::string& m1, const std::string& m2, double theta, double phi,
                                     int cutoff);
LocalOperator phase_operator(const std::string& mode, double phi, int cutoff);
/// Absorber on (mode, medium); rows for inputs it does not define are zero.
LocalOperator generic_tpam_operator(const std::string& mode, const std::string& medium, const GenericTpam& t,
                                    int cutoff);
/// exp(-i H M pi) on (omega, e1, e2) for an effective hopping Hamiltonian
/// coupling |1,0,0>-|0,1,1> with strength 1, |2,0,0>-|1,1,1> with
/// sqrt(1/2) e^{i pump} and |1,1,1>-|0,2,2> with e^{i pump}.
LocalOperator jf_operator(const std::string& omega, const std::string& e1, const std::string& e2,
                          const JfParams& p, int cutoff);

struct OracleResult {
  double p_success = 0.0;
  double fidelity = 0.0;
  std::vector<std::string> detector_modes;
  std::map<std::vector<int>, double> outcomes;
};

/// Runs cfg.variant on a dense density matrix. The doubled scheme supports
/// the generic absorber only (the JF version exceeds a practical dense size).
OracleResult run_dense(const SchemeConfig& cfg, Execution exec = Execution::parallel);

}  // namespace herald::oracle
