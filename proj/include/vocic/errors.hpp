#ifndef VOCIC_ERRORS_HPP
#define VOCIC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace vocic {

// Every failure the library can signal, split into three families:
//   - bad input (parse errors, infeasible parameters, ceilings),
//   - internal consistency traps that indicate a broken invariant and must
//     never be silently absorbed,
//   - everything else (bugs).
enum class errkind {
  parse,                 // malformed input text
  infeasible,            // parameters outside the feasible region
  not_a_component,       // (dim, r) infeasible or not sparse
  ceiling,               // request exceeds the configured size ceiling
  index_range,           // index outside [1, n] or similar
  rank_mismatch,         // operands live over different quivers
  non_divisible,         // exact division failed
  zero_base,             // evaluation at 0 with negative exponents present
  shift_not_even,        // odd power where only even powers may occur
  odd_power,             // Laurent -> q conversion saw an odd exponent
  negative_power,        // Laurent -> q conversion saw a negative exponent
  non_integer_interp,    // interpolation produced a non-integer coefficient
  extra_prime_mismatch,  // held-out prime disagreed with the interpolation
  order_convention,      // monomial evaluation did not match its class
  not_unitriangular,     // bar matrix failed the triangularity check
  no_lattice_solution,   // fixed-point correction left the lattice
  cache_corrupt,         // persistent cache has conflicting entries
  internal               // should not happen
};

class error : public std::runtime_error {
 public:
  error(errkind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
  errkind kind;
};

inline const char* errkind_name(errkind k) {
  switch (k) {
    case errkind::parse: return "parse";
    case errkind::infeasible: return "infeasible";
    case errkind::not_a_component: return "not-a-component";
    case errkind::ceiling: return "ceiling";
    case errkind::index_range: return "index-range";
    case errkind::rank_mismatch: return "rank-mismatch";
    case errkind::non_divisible: return "non-divisible";
    case errkind::zero_base: return "zero-base";
    case errkind::shift_not_even: return "shift-not-even";
    case errkind::odd_power: return "odd-power";
    case errkind::negative_power: return "negative-power";
    case errkind::non_integer_interp: return "non-integer-interpolation";
    case errkind::extra_prime_mismatch: return "extra-prime-mismatch";
    case errkind::order_convention: return "order-convention";
    case errkind::not_unitriangular: return "not-unitriangular";
    case errkind::no_lattice_solution: return "no-lattice-solution";
    case errkind::cache_corrupt: return "cache-corrupt";
    case errkind::internal: return "internal";
  }
  return "unknown";
}

// Process exit codes used by the command line tool: 1 usage, 2 infeasible
// input, 4 internal consistency trap.
inline int exit_code_for(errkind k) {
  switch (k) {
    case errkind::parse:
      return 1;
    case errkind::infeasible:
    case errkind::not_a_component:
    case errkind::ceiling:
    case errkind::index_range:
    case errkind::rank_mismatch:
      return 2;
    default:
      return 4;
  }
}

[[noreturn]] inline void fail(errkind k, const std::string& msg) {
  throw error(k, std::string(errkind_name(k)) + ": " + msg);
}

}  // namespace vocic

#endif
