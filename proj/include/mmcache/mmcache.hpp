#pragma once

#include "mmcache/error.hpp"
#include "mmcache/quadrature.hpp"
#include "mmcache/popularity.hpp"
#include "mmcache/channel.hpp"
#include "mmcache/network.hpp"
#include "mmcache/policy.hpp"
#include "mmcache/association.hpp"
#include "mmcache/asp.hpp"
#include "mmcache/optimizer.hpp"
#include "mmcache/simulator.hpp"
#include "mmcache/experiment.hpp"
