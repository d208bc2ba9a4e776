#pragma once

#include <ostream>

#include "posrep/group_model.hpp"

namespace posrep {

// readable gtest failure messages
template <class S>
void PrintTo(const Mat<S>& m, std::ostream* os) {
  *os << m.str();
}

inline void PrintTo(Err e, std::ostream* os) { *os << err_name(e); }

}  // namespace posrep
