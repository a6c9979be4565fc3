#pragma once

#include "qdf/cayley_table.hpp"
#include "qdf/design.hpp"
#include "qdf/dfbq.hpp"
#include "qdf/errors.hpp"
#include "qdf/io.hpp"
#include "qdf/permutation.hpp"
#include "qdf/search.hpp"
