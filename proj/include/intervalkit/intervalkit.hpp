#ifndef INTERVALKIT_INTERVALKIT_HPP
#define INTERVALKIT_INTERVALKIT_HPP

#include "intervalkit/densities.hpp"
#include "intervalkit/density_config.hpp"
#include "intervalkit/errors.hpp"
#include "intervalkit/expression.hpp"
#include "intervalkit/hpd.hpp"
#include "intervalkit/likelihood.hpp"
#include "intervalkit/numeric.hpp"
#include "intervalkit/special_functions.hpp"
#include "intervalkit/studies.hpp"
#include "intervalkit/transforms.hpp"
#include "intervalkit/version.hpp"

#endif // INTERVALKIT_INTERVALKIT_HPP
