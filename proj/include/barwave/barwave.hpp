#pragma once

#include <barwave/critical.hpp>
#include <barwave/errors.hpp>
#include <barwave/fem.hpp>
#include <barwave/green.hpp>
#include <barwave/modes.hpp>
#include <barwave/params.hpp>
#include <barwave/profile.hpp>
#include <barwave/response.hpp>
#include <barwave/router.hpp>
#include <barwave/scenario.hpp>
#include <barwave/spectrum.hpp>
