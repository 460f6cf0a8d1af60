#pragma once

#include "plemelj/core.hpp"
#include "plemelj/parallel.hpp"
#include "plemelj/fft.hpp"
#include "plemelj/quadrature.hpp"
#include "plemelj/interpolation.hpp"
#include "plemelj/geometry.hpp"
#include "plemelj/spectral.hpp"
#include "plemelj/functions.hpp"
#include "plemelj/conformal.hpp"
#include "plemelj/sobolev.hpp"
#include "plemelj/cauchy.hpp"
#include "plemelj/beurling.hpp"
#include "plemelj/regularity.hpp"
#include "plemelj/io.hpp"
#include "plemelj/experiments.hpp"
