// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 haartv contributors

#ifndef HAARTV_HAARTV_HPP
#define HAARTV_HAARTV_HPP

#include "haartv/common.hpp"
#include "haartv/gradient.hpp"
#include "haartv/io.hpp"
#include "haartv/metrics.hpp"
#include "haartv/phantom.hpp"
#include "haartv/shrink.hpp"
#include "haartv/transform.hpp"
#include "haartv/volume.hpp"

#endif  // HAARTV_HAARTV_HPP
