#pragma once

#include "hopath/caustic.hpp"
#include "hopath/config.hpp"
#include "hopath/errors.hpp"
#include "hopath/gaussian_packet.hpp"
#include "hopath/kernel.hpp"
#include "hopath/lattice_action.hpp"
#include "hopath/oracle.hpp"
#include "hopath/parallel.hpp"
#include "hopath/quadrature.hpp"
#include "hopath/signed_log.hpp"
#include "hopath/spectral.hpp"
