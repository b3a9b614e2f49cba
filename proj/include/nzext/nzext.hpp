#pragma once

#include "nzext/errors.hpp"
#include "nzext/field.hpp"
#include "nzext/matrix.hpp"
#include "nzext/algebra.hpp"
#include "nzext/module.hpp"
#include "nzext/decompose.hpp"
#include "nzext/linsys.hpp"
#include "nzext/complex.hpp"
#include "nzext/resolution.hpp"
#include "nzext/ext.hpp"
#include "nzext/homotopy.hpp"
#include "nzext/tilting.hpp"
#include "nzext/nexact.hpp"
#include "nzext/verify.hpp"
