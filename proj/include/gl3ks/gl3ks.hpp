#pragma once

#include "gl3ks/arith.hpp"
#include "gl3ks/bilinear.hpp"
#include "gl3ks/calibration.hpp"
#include "gl3ks/classical.hpp"
#include "gl3ks/cyclotomic.hpp"
#include "gl3ks/errors.hpp"
#include "gl3ks/gl3_sums.hpp"
#include "gl3ks/rng.hpp"
#include "gl3ks/transforms.hpp"
#include "gl3ks/verify.hpp"
