#pragma once

#include "decomp.hpp"
#include "errors.hpp"
#include "field.hpp"
#include "instancegen.hpp"
#include "linalg.hpp"
#include "matrix.hpp"
#include "minrank.hpp"
#include "poly.hpp"
#include "tensor.hpp"
