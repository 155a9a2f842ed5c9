#pragma once

// Umbrella header: exact Artin-Schreier descent over F_q(t) -- ramification
// classification, torsor-class normal forms, certified killing towers, and
// ramified-cover plans over the projective line.

#include "approx.hpp"
#include "brute.hpp"
#include "certificate.hpp"
#include "cover.hpp"
#include "errors.hpp"
#include "fiber.hpp"
#include "fq.hpp"
#include "kill.hpp"
#include "linalg.hpp"
#include "place.hpp"
#include "poly.hpp"
#include "qclass.hpp"
#include "ramification.hpp"
#include "rational.hpp"
#include "selftest.hpp"
#include "series.hpp"
#include "torsor.hpp"
#include "tower.hpp"
#include "wp.hpp"
